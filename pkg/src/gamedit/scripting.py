"""Headless edit scripts: the same operators, replayed from a JSON file.

A script is an ordered list of tool invocations.  Each op targets a term
through an explicit bin-index range, an x-range resolved against the term's
bin edges, or a list of categorical labels.  Ops are applied in order and
auto-committed with confirmed commits; the run aborts at the first failure
(including no-op edits) reporting the op index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .dataset import Dataset
from .edits import Anchor, Direction, EditOp, EditTool, InterpolateMode, Selection
from .errors import GamEditError, SchemaError, ScriptError
from .history import Commit
from .metrics import Scope
from .model import GamModel, TermKind, bin_index
from .session import EditorSession, ReportTriple

SCRIPT_VERSION = 1

_STEP_KEYS = {"tool", "term", "bins", "x_range", "labels", "delta", "mode",
              "segments", "direction", "anchor", "message"}


@dataclass(frozen=True)
class ScriptStep:
    tool: str
    term: str
    bins: Optional[tuple[int, int]] = None          # inclusive index range
    x_range: Optional[tuple[Optional[float], Optional[float]]] = None
    labels: Optional[tuple[str, ...]] = None
    delta: Optional[float] = None
    mode: Optional[str] = None
    segments: Optional[int] = None
    direction: Optional[str] = None
    anchor: Optional[str] = None
    message: Optional[str] = None


@dataclass(frozen=True)
class ScriptResult:
    session: EditorSession
    commits: tuple[Commit, ...]
    before: Optional[ReportTriple]
    after: Optional[ReportTriple]

    @property
    def model(self) -> GamModel:
        return self.session.model


def parse_script(source: Union[str, bytes, Path]) -> list[ScriptStep]:
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    elif isinstance(source, bytes):
        text = source.decode("utf-8")
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("$", f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected an object")
    for key in doc:
        if key not in {"format_version", "ops"}:
            raise SchemaError(f"$.{key}", "unknown field")
    if doc.get("format_version") != SCRIPT_VERSION:
        raise SchemaError("$.format_version", f"unsupported version {doc.get('format_version')!r}")
    raw_ops = doc.get("ops")
    if not isinstance(raw_ops, list):
        raise SchemaError("$.ops", "expected an array")
    steps = []
    for i, raw in enumerate(raw_ops):
        path = f"$.ops[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(path, "expected an object")
        for key in raw:
            if key not in _STEP_KEYS:
                raise SchemaError(f"{path}.{key}", "unknown field")
        if "tool" not in raw or "term" not in raw:
            raise SchemaError(path, "op requires 'tool' and 'term'")
        targets = [k for k in ("bins", "x_range", "labels") if raw.get(k) is not None]
        if len(targets) != 1:
            raise SchemaError(path, "op requires exactly one of 'bins', 'x_range', 'labels'")
        step = dict(raw)
        if "bins" in targets:
            pair = raw["bins"]
            if (not isinstance(pair, list) or len(pair) != 2
                    or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair)):
                raise SchemaError(f"{path}.bins", "expected [low, high] bin indices")
            step["bins"] = (pair[0], pair[1])
        if "x_range" in targets:
            pair = raw["x_range"]
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError(f"{path}.x_range", "expected [low, high] with null for open ends")
            for v in pair:
                if v is not None and (isinstance(v, bool) or not isinstance(v, (int, float))):
                    raise SchemaError(f"{path}.x_range", "bounds must be numbers or null")
            step["x_range"] = (pair[0], pair[1])
        if "labels" in targets:
            values = raw["labels"]
            if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
                raise SchemaError(f"{path}.labels", "expected an array of label strings")
            step["labels"] = tuple(values)
        steps.append(ScriptStep(**step))
    return steps


def resolve_step(step: ScriptStep, model: GamModel) -> EditOp:
    """Turn a script record into a concrete EditOp against this model."""
    term = model.term(step.term)  # KeyError surfaces through run_script
    if step.bins is not None:
        low, high = step.bins
        indices = tuple(range(low, high + 1))
    elif step.x_range is not None:
        if term.kind is not TermKind.CONTINUOUS:
            raise GamEditError(f"x_range targets require a continuous term, got {term.name!r}")
        low, high = step.x_range
        first = 0 if low is None else bin_index(term, float(low))
        last = term.n_bins - 1 if high is None else bin_index(term, float(high))
        indices = tuple(range(first, last + 1))
    else:
        indices = tuple(sorted(bin_index(term, label) for label in step.labels))
    selection = Selection(term_name=step.term, bin_indices=indices)
    return EditOp(
        tool=EditTool(step.tool),
        selection=selection,
        delta=step.delta,
        mode=None if step.mode is None else InterpolateMode(step.mode),
        segments=step.segments,
        direction=None if step.direction is None else Direction(step.direction),
        anchor=None if step.anchor is None else Anchor(step.anchor),
    )


def run_script(model: GamModel, dataset: Optional[Dataset],
               steps: list[ScriptStep], *, threshold: float = 0.5) -> ScriptResult:
    """Apply every op, auto-committing and confirming each one.

    Raises :class:`ScriptError` carrying the 0-based index of the first op
    that fails to resolve, changes nothing, or cannot be applied.
    """
    session = EditorSession(model, dataset=dataset, threshold=threshold)
    before = session.metrics(Scope.global_()) if dataset is not None else None
    commits = []
    for i, step in enumerate(steps):
        try:
            op = resolve_step(step, session.model)
            staged = session.preview(op)
            if staged.diff.is_noop:
                session.discard()
                raise GamEditError("op is a no-op: it does not change any score")
            commit = session.accept()
            if step.message:
                commit = session.set_message(commit.id, step.message)
            commit = session.confirm(commit.id)
            commits.append(commit)
        except ScriptError:
            raise
        except (GamEditError, KeyError, ValueError) as e:
            raise ScriptError(i, e) from e
    after = session.metrics(Scope.global_()) if dataset is not None else None
    return ScriptResult(session=session, commits=tuple(commits),
                        before=before, after=after)
