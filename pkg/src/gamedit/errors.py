"""Exception types shared across the package.

Every error carries a stable ``code`` (the class name) so the wire protocol
and the CLI can report failures uniformly.
"""

from __future__ import annotations


class GamEditError(Exception):
    """Base class for all gamedit errors."""

    @property
    def code(self) -> str:
        return type(self).__name__

    def details(self) -> dict:
        """Extra JSON-serializable context for protocol error payloads."""
        return {}


class UnknownCategory(GamEditError):
    def __init__(self, term_name: str, label: str):
        super().__init__(f"term {term_name!r} has no bin for label {label!r}")
        self.term_name = term_name
        self.label = label

    def details(self) -> dict:
        return {"term": self.term_name, "label": self.label}


class DegenerateCounts(GamEditError):
    """Raised when an operation needs a positive total bin count."""


class InvalidSelection(GamEditError):
    pass


class InteractionNotEditable(GamEditError):
    pass


class DegenerateGeometry(GamEditError):
    """Raised when selected bins do not span a usable x-range."""


class StagedEditPending(GamEditError):
    def __init__(self):
        super().__init__("a staged edit is pending; accept or discard it first")


class NoStagedEdit(GamEditError):
    def __init__(self):
        super().__init__("no staged edit to resolve")


class EmptyDiff(GamEditError):
    """Raised when committing an edit that changes nothing."""


class NothingToUndo(GamEditError):
    def __init__(self):
        super().__init__("already at the root version")


class NothingToRedo(GamEditError):
    def __init__(self):
        super().__init__("no undone edits to reapply")


class UnknownCommit(GamEditError):
    def __init__(self, commit_id: str):
        super().__init__(f"no commit with id {commit_id!r}")
        self.commit_id = commit_id

    def details(self) -> dict:
        return {"id": self.commit_id}


class UnknownSlice(GamEditError):
    pass


class SchemaError(GamEditError):
    """Model or script document violates the published schema.

    ``path`` points at the offending node, e.g. ``$.terms[2].scores``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path

    def details(self) -> dict:
        return {"path": self.path}


class ReplayMismatch(GamEditError):
    """Stored history does not reproduce the stored model."""

    def __init__(self, commit_id: str, message: str):
        super().__init__(f"commit {commit_id}: {message}")
        self.commit_id = commit_id

    def details(self) -> dict:
        return {"id": self.commit_id}


class MissingColumn(GamEditError):
    def __init__(self, column: str):
        super().__init__(f"dataset is missing required column {column!r}")
        self.column = column

    def details(self) -> dict:
        return {"column": self.column}


class RowParseError(GamEditError):
    """A dataset row could not be parsed. ``row`` is 1-based, excluding the header."""

    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row

    def details(self) -> dict:
        return {"row": self.row}


class ScriptError(GamEditError):
    """An edit script failed. ``index`` is the 0-based position of the failing op."""

    def __init__(self, index: int, cause: Exception):
        super().__init__(f"script op {index} failed: {cause}")
        self.index = index
        self.cause = cause

    def details(self) -> dict:
        return {"index": self.index}
