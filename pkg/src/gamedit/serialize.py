"""Model file format: canonical JSON with an optional embedded history.

The file stores the head (current) model; when a history block is present
the original model is reconstructed by unwinding the applied diffs, then the
whole chain is re-verified: parent links, content-hash ids, diff coherence,
and that replaying from the original reproduces the stored weights bit for
bit.  Saving the result of a load yields byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .canonical import canonical_json, diff_from_jsonable, diff_to_jsonable
from .edits import apply_diff
from .errors import ReplayMismatch, SchemaError
from .history import ROOT_ID, Commit, HistoryState, compute_commit_id
from .model import FeatureTerm, GamModel, InteractionTerm, LinkFunction, TermKind

FORMAT_VERSION = 1

_ROOT_KEYS = {"format_version", "link", "intercept", "terms", "interactions", "history"}
_TERM_KEYS = {"name", "kind", "bin_edges", "bin_labels", "scores", "counts", "score_stddev"}
_INTERACTION_KEYS = {"feature_a", "feature_b", "scores"}
_HISTORY_KEYS = {"head", "commits"}
_COMMIT_KEYS = {"id", "parent", "timestamp", "message", "confirmed", "diff"}
_DIFF_KEYS = {"term", "bins", "old", "new"}


@dataclass(frozen=True)
class LoadedModel:
    model: GamModel                      # state at head
    history: Optional[HistoryState]     # None when the file has no history block
    original: GamModel                  # state at ROOT (== model without history)


def _reject_unknown(doc: dict, allowed: set[str], path: str) -> None:
    for key in doc:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}", "unknown field")


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise SchemaError(path, f"missing required field {key!r}")
    return doc[key]


def _number_list(value, path: str) -> list[float]:
    if not isinstance(value, list):
        raise SchemaError(path, "expected an array of numbers")
    out = []
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaError(f"{path}[{i}]", "expected a number")
        out.append(float(v))
    return out


def _int_list(value, path: str) -> list[int]:
    if not isinstance(value, list):
        raise SchemaError(path, "expected an array of integers")
    out = []
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, int):
            raise SchemaError(f"{path}[{i}]", "expected an integer")
        out.append(v)
    return out


def term_to_jsonable(term: FeatureTerm) -> dict:
    doc: dict = {"name": term.name, "kind": term.kind.value}
    if term.kind is TermKind.CONTINUOUS:
        doc["bin_edges"] = [float(v) for v in term.bin_edges]
    else:
        doc["bin_labels"] = list(term.bin_labels)
    doc["scores"] = [float(v) for v in term.scores]
    doc["counts"] = [int(v) for v in term.counts]
    if term.score_stddev is not None:
        doc["score_stddev"] = [float(v) for v in term.score_stddev]
    return doc


def _term_from_jsonable(doc, path: str) -> FeatureTerm:
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    _reject_unknown(doc, _TERM_KEYS, path)
    name = _require(doc, "name", path)
    kind = _require(doc, "kind", path)
    if kind not in (TermKind.CONTINUOUS.value, TermKind.CATEGORICAL.value):
        raise SchemaError(f"{path}.kind", f"unknown term kind {kind!r}")
    scores = _number_list(_require(doc, "scores", path), f"{path}.scores")
    counts = _int_list(_require(doc, "counts", path), f"{path}.counts")
    stddev = None
    if doc.get("score_stddev") is not None:
        stddev = _number_list(doc["score_stddev"], f"{path}.score_stddev")
    edges = labels = None
    if kind == TermKind.CONTINUOUS.value:
        edges = _number_list(_require(doc, "bin_edges", path), f"{path}.bin_edges")
        if "bin_labels" in doc:
            raise SchemaError(f"{path}.bin_labels", "not allowed on a continuous term")
    else:
        raw = _require(doc, "bin_labels", path)
        if not isinstance(raw, list) or not all(isinstance(v, str) for v in raw):
            raise SchemaError(f"{path}.bin_labels", "expected an array of strings")
        labels = tuple(raw)
        if "bin_edges" in doc:
            raise SchemaError(f"{path}.bin_edges", "not allowed on a categorical term")
    try:
        return FeatureTerm(name=name, kind=TermKind(kind), scores=np.array(scores),
                           counts=np.array(counts, dtype=np.int64),
                           bin_edges=None if edges is None else np.array(edges),
                           bin_labels=labels,
                           score_stddev=None if stddev is None else np.array(stddev))
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def model_to_jsonable(model: GamModel) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "link": model.link.value,
        "intercept": float(model.intercept),
        "terms": [term_to_jsonable(t) for t in model.terms],
        "interactions": [
            {
                "feature_a": i.feature_a,
                "feature_b": i.feature_b,
                "scores": [[float(v) for v in row] for row in i.scores],
            }
            for i in model.interactions
        ],
    }


def _model_from_jsonable(doc, path: str = "$") -> GamModel:
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    _reject_unknown(doc, _ROOT_KEYS, path)
    version = _require(doc, "format_version", path)
    if version != FORMAT_VERSION:
        raise SchemaError(f"{path}.format_version", f"unsupported version {version!r}")
    link = _require(doc, "link", path)
    if link not in (LinkFunction.LOGIT.value, LinkFunction.IDENTITY.value):
        raise SchemaError(f"{path}.link", f"unknown link {link!r}")
    intercept = _require(doc, "intercept", path)
    if isinstance(intercept, bool) or not isinstance(intercept, (int, float)):
        raise SchemaError(f"{path}.intercept", "expected a number")
    raw_terms = _require(doc, "terms", path)
    if not isinstance(raw_terms, list) or not raw_terms:
        raise SchemaError(f"{path}.terms", "expected a non-empty array")
    terms = tuple(_term_from_jsonable(t, f"{path}.terms[{i}]")
                  for i, t in enumerate(raw_terms))
    interactions = []
    for i, raw in enumerate(doc.get("interactions", []) or []):
        ipath = f"{path}.interactions[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(ipath, "expected an object")
        _reject_unknown(raw, _INTERACTION_KEYS, ipath)
        grid = _require(raw, "scores", ipath)
        if not isinstance(grid, list):
            raise SchemaError(f"{ipath}.scores", "expected a 2-D array")
        rows = [_number_list(row, f"{ipath}.scores[{r}]") for r, row in enumerate(grid)]
        try:
            interactions.append(InteractionTerm(
                feature_a=_require(raw, "feature_a", ipath),
                feature_b=_require(raw, "feature_b", ipath),
                scores=np.array(rows, dtype=np.float64),
            ))
        except ValueError as e:
            raise SchemaError(ipath, str(e)) from None
    try:
        return GamModel(intercept=float(intercept), link=LinkFunction(link),
                        terms=terms, interactions=tuple(interactions))
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def history_to_jsonable(history: HistoryState) -> dict:
    return {
        "head": history.head,
        "commits": [
            {
                "id": c.id,
                "parent": c.parent_id,
                "timestamp": c.timestamp_ms,
                "message": c.message,
                "confirmed": c.confirmed,
                "diff": diff_to_jsonable(c.diff),
            }
            for c in history.commits
        ],
    }


def _commits_from_jsonable(doc, path: str) -> tuple[list[Commit], int]:
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    _reject_unknown(doc, _HISTORY_KEYS, path)
    head = _require(doc, "head", path)
    raw_commits = _require(doc, "commits", path)
    if not isinstance(raw_commits, list):
        raise SchemaError(f"{path}.commits", "expected an array")
    if isinstance(head, bool) or not isinstance(head, int) or not 0 <= head <= len(raw_commits):
        raise SchemaError(f"{path}.head", "head must be an integer within the commit count")
    commits = []
    for i, raw in enumerate(raw_commits):
        cpath = f"{path}.commits[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(cpath, "expected an object")
        _reject_unknown(raw, _COMMIT_KEYS, cpath)
        raw_diff = _require(raw, "diff", cpath)
        if not isinstance(raw_diff, dict):
            raise SchemaError(f"{cpath}.diff", "expected an object")
        _reject_unknown(raw_diff, _DIFF_KEYS, f"{cpath}.diff")
        diff = diff_from_jsonable({
            "term": _require(raw_diff, "term", f"{cpath}.diff"),
            "bins": _int_list(_require(raw_diff, "bins", f"{cpath}.diff"), f"{cpath}.diff.bins"),
            "old": _number_list(_require(raw_diff, "old", f"{cpath}.diff"), f"{cpath}.diff.old"),
            "new": _number_list(_require(raw_diff, "new", f"{cpath}.diff"), f"{cpath}.diff.new"),
        })
        confirmed = _require(raw, "confirmed", cpath)
        if not isinstance(confirmed, bool):
            raise SchemaError(f"{cpath}.confirmed", "expected a boolean")
        timestamp = _require(raw, "timestamp", cpath)
        if isinstance(timestamp, bool) or not isinstance(timestamp, int):
            raise SchemaError(f"{cpath}.timestamp", "expected an integer")
        commits.append(Commit(
            id=_require(raw, "id", cpath),
            parent_id=_require(raw, "parent", cpath),
            diff=diff,
            timestamp_ms=timestamp,
            message=str(_require(raw, "message", cpath)),
            confirmed=confirmed,
        ))
    return commits, head


def _models_equal(a: GamModel, b: GamModel) -> bool:
    if a.intercept != b.intercept or len(a.terms) != len(b.terms):
        return False
    return all(ta.scores.tobytes() == tb.scores.tobytes()
               for ta, tb in zip(a.terms, b.terms))


def _verify_history(model: GamModel, commits: list[Commit], head: int) -> HistoryState:
    parent = ROOT_ID
    for commit in commits:
        if commit.parent_id != parent:
            raise ReplayMismatch(commit.id, "parent does not continue the chain")
        expected = compute_commit_id(commit.parent_id, commit.diff)
        if commit.id != expected:
            raise ReplayMismatch(commit.id, "content hash does not match commit id")
        parent = commit.id

    # Unwind the applied diffs to recover the original model, then replay
    # the whole chain forward, checking old scores and the head state.
    original = model
    for commit in reversed(commits[:head]):
        try:
            original = apply_diff(original, commit.diff, reverse=True)
        except (KeyError, IndexError):
            raise ReplayMismatch(commit.id, "diff does not fit the stored model") from None

    state = original
    for i, commit in enumerate(commits):
        diff = commit.diff
        try:
            term = state.term(diff.term_name)
            recorded = np.array(diff.old_scores)
            actual = term.scores[list(diff.bin_indices)]
        except (KeyError, IndexError):
            raise ReplayMismatch(commit.id, "diff does not fit the stored model") from None
        if recorded.tobytes() != actual.tobytes():
            raise ReplayMismatch(commit.id, "recorded old scores do not match replay state")
        state = apply_diff(state, diff)
        if i + 1 == head and not _models_equal(state, model):
            raise ReplayMismatch(commit.id, "replayed history does not reproduce the stored model")
    return HistoryState(original, commits=commits, head=head)


def save_model(model: GamModel, history: Optional[HistoryState] = None) -> str:
    """Canonical file text (indent 2, trailing newline)."""
    doc = model_to_jsonable(model)
    if history is not None and history.commits:
        doc["history"] = history_to_jsonable(history)
    return canonical_json(doc, indent=2) + "\n"


def write_model(path: Union[str, Path], model: GamModel,
                history: Optional[HistoryState] = None) -> None:
    Path(path).write_text(save_model(model, history), encoding="utf-8")


def load_model(source: Union[str, bytes, Path]) -> LoadedModel:
    """Parse, validate, and (when history is present) replay-verify a model file."""
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
    model = _model_from_jsonable(doc)
    if "history" not in doc or doc["history"] is None:
        return LoadedModel(model=model, history=None, original=model)
    commits, head = _commits_from_jsonable(doc["history"], "$.history")
    history = _verify_history(model, commits, head)
    return LoadedModel(model=model, history=history, original=history.original_model)


def read_model(path: Union[str, Path]) -> LoadedModel:
    return load_model(Path(path))
