"""Linear, git-style edit history.

Every accepted edit becomes a commit holding the exact diff, a content hash
id, a timestamp, and an editable message.  The id covers only the parent id
and the canonical diff bytes, so documenting or confirming a commit never
changes identity.  Undo/redo move the head along the chain; committing with
undone edits ahead of the head discards them (standard redo-tail
truncation).  Saving is gated on every applied commit being explicitly
confirmed.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, replace
from typing import Optional

from .canonical import canonical_json, diff_to_jsonable
from .edits import Anchor, Direction, EditDiff, EditOp, EditTool, InterpolateMode, apply_diff
from .errors import (
    EmptyDiff,
    NothingToRedo,
    NothingToUndo,
    UnknownCommit,
)
from .model import FeatureTerm, GamModel, TermKind

ROOT_ID = "ROOT"

#: Snapshot spacing for checkout reconstruction.
CHECKPOINT_EVERY = 32


@dataclass(frozen=True)
class Commit:
    id: str
    parent_id: str
    diff: EditDiff
    timestamp_ms: int
    message: str
    confirmed: bool = False


@dataclass(frozen=True)
class SaveGate:
    ok: bool
    unconfirmed: tuple[str, ...]


def compute_commit_id(parent_id: str, diff: EditDiff) -> str:
    """First 8 hex digits of sha256 over the parent id and canonical diff."""
    payload = parent_id + "\n" + canonical_json(diff_to_jsonable(diff))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:8]


_TOOL_TOKENS = {
    (EditTool.MOVE, None): "move",
    (EditTool.DELETE, None): "delete",
    (EditTool.INTERPOLATE, InterpolateMode.LINEAR): "interpolate",
    (EditTool.INTERPOLATE, InterpolateMode.EQUAL_BINS): "interpolate-eq",
    (EditTool.INTERPOLATE, InterpolateMode.REGRESSION): "interpolate-reg",
    (EditTool.MONOTONIZE, Direction.INCREASING): "monotonize-inc",
    (EditTool.MONOTONIZE, Direction.DECREASING): "monotonize-dec",
    (EditTool.ALIGN, Anchor.LEFT): "align-left",
    (EditTool.ALIGN, Anchor.RIGHT): "align-right",
    (EditTool.ALIGN, Anchor.WEIGHTED_MEAN): "align-mean",
}


def _tool_token(op: EditOp) -> str:
    variant = op.mode if op.tool is EditTool.INTERPOLATE else (
        op.direction if op.tool is EditTool.MONOTONIZE else (
            op.anchor if op.tool is EditTool.ALIGN else None))
    return _TOOL_TOKENS[(op.tool, variant)]


def _format_number(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def auto_message(op: EditOp, term: FeatureTerm) -> str:
    """Initial commit message describing the edit; users can rewrite it."""
    indices = op.selection.bin_indices
    n = len(indices)
    if term.kind is TermKind.CONTINUOUS:
        low = _format_number(float(term.bin_edges[indices[0]]))
        high = _format_number(float(term.bin_edges[indices[-1]]))
        region = f"[{low}, {high}]"
    else:
        labels = ", ".join(term.bin_labels[i] for i in indices)
        region = "{" + labels + "}"
    return f"{_tool_token(op)} {term.name} {region} ({n} bins)"


class HistoryState:
    """Commit chain plus the head position (number of applied commits).

    The model at any position can be reconstructed exactly by replaying
    diffs from the nearest memoized checkpoint; checkpoint 0 is the original
    model.
    """

    def __init__(self, original_model: GamModel,
                 commits: Optional[list[Commit]] = None,
                 head: Optional[int] = None):
        self.commits: list[Commit] = list(commits or [])
        self.head: int = len(self.commits) if head is None else head
        if not 0 <= self.head <= len(self.commits):
            raise ValueError(f"head {self.head} out of range")
        self._checkpoints: dict[int, GamModel] = {0: original_model}

    @property
    def original_model(self) -> GamModel:
        return self._checkpoints[0]

    @property
    def head_id(self) -> str:
        return self.commits[self.head - 1].id if self.head > 0 else ROOT_ID

    @property
    def can_undo(self) -> bool:
        return self.head > 0

    @property
    def can_redo(self) -> bool:
        return self.head < len(self.commits)

    def find(self, commit_id: str) -> tuple[int, Commit]:
        for i, commit in enumerate(self.commits):
            if commit.id == commit_id:
                return i, commit
        raise UnknownCommit(commit_id)

    def commit(self, diff: EditDiff, model_after: GamModel, message: str,
               *, timestamp_ms: Optional[int] = None) -> Commit:
        """Append a commit at head+1, discarding any undone tail."""
        if diff.is_noop:
            raise EmptyDiff("edit does not change any score")
        if self.head < len(self.commits):
            del self.commits[self.head:]
            for key in [k for k in self._checkpoints if k > self.head]:
                del self._checkpoints[key]
        entry = Commit(
            id=compute_commit_id(self.head_id, diff),
            parent_id=self.head_id,
            diff=diff,
            timestamp_ms=int(time.time() * 1000) if timestamp_ms is None else timestamp_ms,
            message=message,
            confirmed=False,
        )
        self.commits.append(entry)
        self.head += 1
        if self.head % CHECKPOINT_EVERY == 0:
            self._checkpoints[self.head] = model_after
        return entry

    def undo(self, model: GamModel) -> GamModel:
        if not self.can_undo:
            raise NothingToUndo()
        diff = self.commits[self.head - 1].diff
        self.head -= 1
        return apply_diff(model, diff, reverse=True)

    def redo(self, model: GamModel) -> GamModel:
        if not self.can_redo:
            raise NothingToRedo()
        diff = self.commits[self.head].diff
        self.head += 1
        return apply_diff(model, diff)

    def checkout(self, commit_id: str, model: GamModel) -> GamModel:
        """Move the head to a commit (or ROOT) and return that snapshot.

        Later commits stay available for redo or re-checkout until a new
        commit truncates them.
        """
        if commit_id == ROOT_ID:
            target = 0
        else:
            position, _ = self.find(commit_id)
            target = position + 1
        if target == self.head:
            return model
        self.head = target
        return self.model_at(target)

    def model_at(self, position: int) -> GamModel:
        """Snapshot after the first ``position`` commits, by exact replay."""
        if not 0 <= position <= len(self.commits):
            raise ValueError(f"position {position} out of range")
        start = max(k for k in self._checkpoints if k <= position)
        model = self._checkpoints[start]
        for i in range(start, position):
            model = apply_diff(model, self.commits[i].diff)
        return model

    def save_gate(self) -> SaveGate:
        """Saving requires every applied commit to be confirmed."""
        unconfirmed = tuple(c.id for c in self.commits[:self.head] if not c.confirmed)
        return SaveGate(ok=not unconfirmed, unconfirmed=unconfirmed)

    def set_message(self, commit_id: str, message: str) -> Commit:
        position, commit = self.find(commit_id)
        updated = replace(commit, message=message)
        self.commits[position] = updated
        return updated

    def confirm(self, commit_id: str, confirmed: bool = True) -> Commit:
        position, commit = self.find(commit_id)
        updated = replace(commit, confirmed=confirmed)
        self.commits[position] = updated
        return updated
