"""Request/response message catalog the editor UI (or any client) drives.

Each message is a JSON object with a ``type`` plus parameters; every
response is an envelope ``{"ok": true, "data": ...}`` or
``{"ok": false, "error": {"type", "message", ...}}``.  The catalog covers
every editing capability exactly once: LoadModel, ListFeatures, GetFeature,
PreviewEdit, ResolvePreview, Undo, Redo, Checkout, ConfirmCommit,
SetMessage, GetMetrics, GetCorrelation, GetHistory, SaveModel.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from .correlation import RankedFeature
from .edits import EditOp, EditTool, Selection
from .errors import GamEditError
from .history import Commit
from .metrics import MetricReport, Scope
from .model import TermKind
from .session import EditorSession, ReportTriple

#: Messages that change session state and must go through the command queue.
MUTATING_MESSAGES = frozenset({
    "PreviewEdit", "ResolvePreview", "Undo", "Redo", "Checkout",
    "ConfirmCommit", "SetMessage", "SaveModel",
})


def report_to_jsonable(report: MetricReport) -> dict:
    doc: dict = {"scope": report.scope, "sample_count": report.sample_count}
    if report.classification is not None:
        c = report.classification
        doc["classification"] = {
            "confusion": {"tp": c.confusion.tp, "fp": c.confusion.fp,
                          "tn": c.confusion.tn, "fn": c.confusion.fn},
            "accuracy": c.accuracy,
            "balanced_accuracy": c.balanced_accuracy,
            "auc": c.auc,
        }
    if report.regression is not None:
        r = report.regression
        doc["regression"] = {"rmse": r.rmse, "mae": r.mae, "mape": r.mape,
                             "mape_excluded": r.mape_excluded}
    return doc


def triple_to_jsonable(triple: ReportTriple) -> dict:
    return {
        "original": report_to_jsonable(triple.original),
        "previous": report_to_jsonable(triple.previous),
        "current": report_to_jsonable(triple.current),
    }


def commit_to_jsonable(commit: Commit) -> dict:
    return {
        "id": commit.id,
        "parent": commit.parent_id,
        "timestamp": commit.timestamp_ms,
        "message": commit.message,
        "confirmed": commit.confirmed,
        "diff": {
            "term": commit.diff.term_name,
            "bins": list(commit.diff.bin_indices),
            "old": list(commit.diff.old_scores),
            "new": list(commit.diff.new_scores),
        },
    }


def ranked_to_jsonable(entry: RankedFeature, term) -> dict:
    doc = {
        "name": entry.term_name,
        "distance": entry.distance,
        "full": [float(v) for v in entry.full.frequencies],
        "selected": [float(v) for v in entry.selected.frequencies],
        "selected_empty": entry.selected.is_empty,
    }
    if term.kind is TermKind.CONTINUOUS:
        doc["bin_edges"] = [float(v) for v in term.bin_edges]
    else:
        doc["bin_labels"] = list(term.bin_labels)
    return doc


def _parse_selection(params: dict) -> Selection:
    term = params.get("term")
    bins = params.get("bins")
    if not isinstance(term, str) or not isinstance(bins, list):
        raise GamEditError("selection requires 'term' and a 'bins' index list")
    return Selection(term_name=term, bin_indices=tuple(int(b) for b in bins))


def _parse_scope(params: dict) -> Scope:
    raw = params.get("scope")
    if not isinstance(raw, dict) or "kind" not in raw:
        raise GamEditError("GetMetrics requires a 'scope' object with a 'kind'")
    kind = raw["kind"]
    if kind == "global":
        return Scope.global_()
    if kind == "selected":
        return Scope.selected(_parse_selection(raw))
    if kind == "slice":
        return Scope.slice_(raw.get("term"), raw.get("label"))
    raise GamEditError(f"unknown scope kind {kind!r}")


def _parse_op(params: dict) -> EditOp:
    raw = params.get("op")
    if not isinstance(raw, dict):
        raise GamEditError("PreviewEdit requires an 'op' object")
    selection = _parse_selection(raw)
    return EditOp(
        tool=EditTool(raw.get("tool")),
        selection=selection,
        delta=raw.get("delta"),
        mode=raw.get("mode"),
        segments=raw.get("segments"),
        direction=raw.get("direction"),
        anchor=raw.get("anchor"),
    )


class SessionProtocol:
    """Stateless adapter between JSON messages and one :class:`EditorSession`."""

    def __init__(self, session: EditorSession, save_path: Optional[Path] = None):
        self.session = session
        self.save_path = Path(save_path) if save_path is not None else None

    def handle(self, message: dict) -> dict:
        """Process one message, returning the response envelope."""
        if not isinstance(message, dict) or "type" not in message:
            return _error_envelope("BadRequest", "message requires a 'type' field")
        kind = message["type"]
        handler = getattr(self, f"_handle_{_snake(kind)}", None)
        if kind not in _CATALOG or handler is None:
            return _error_envelope("UnknownMessage", f"unknown message type {kind!r}")
        try:
            return {"ok": True, "data": handler(message)}
        except GamEditError as e:
            return _error_envelope(e.code, str(e), e.details())

    # -- handlers ------------------------------------------------------

    def _handle_load_model(self, params: dict) -> dict:
        session = self.session
        model = session.current_model
        return {
            "link": model.link.value,
            "intercept": model.intercept,
            "feature_count": model.feature_count,
            "n_samples": len(session.dataset) if session.dataset is not None else 0,
            "threshold": session.threshold,
            "features": session.feature_summaries(),
            "interactions": [{"feature_a": i.feature_a, "feature_b": i.feature_b}
                             for i in model.interactions],
            "head": session.history.head_id,
            "can_undo": session.history.can_undo,
            "can_redo": session.history.can_redo,
        }

    def _handle_list_features(self, params: dict) -> dict:
        return {"features": self.session.feature_summaries()}

    def _handle_get_feature(self, params: dict) -> dict:
        session = self.session
        if params.get("interaction") is not None:
            pair = params["interaction"]
            for inter in session.current_model.interactions:
                if [inter.feature_a, inter.feature_b] == list(pair):
                    return {
                        "feature_a": inter.feature_a,
                        "feature_b": inter.feature_b,
                        "scores": [[float(v) for v in row] for row in inter.scores],
                        "editable": False,
                    }
            raise GamEditError(f"no interaction {pair!r}")
        name = params.get("name")
        try:
            current = session.current_model.term(name)
            original = session.original_model.term(name)
            previous = session.previous_model.term(name)
        except KeyError:
            raise GamEditError(f"unknown term {name!r}") from None
        doc: dict = {"name": current.name, "kind": current.kind.value, "editable": True}
        if current.kind is TermKind.CONTINUOUS:
            doc["bin_edges"] = [float(v) for v in current.bin_edges]
        else:
            doc["bin_labels"] = list(current.bin_labels)
        doc["scores"] = [float(v) for v in current.scores]
        doc["original_scores"] = [float(v) for v in original.scores]
        doc["previous_scores"] = [float(v) for v in previous.scores]
        doc["counts"] = [int(v) for v in current.counts]
        doc["score_stddev"] = (None if current.score_stddev is None
                               else [float(v) for v in current.score_stddev])
        return doc

    def _handle_preview_edit(self, params: dict) -> dict:
        staged = self.session.preview(_parse_op(params))
        return {
            "diff": {
                "term": staged.diff.term_name,
                "bins": list(staged.diff.bin_indices),
                "old": list(staged.diff.old_scores),
                "new": list(staged.diff.new_scores),
            },
            "noop": staged.diff.is_noop,
        }

    def _handle_resolve_preview(self, params: dict) -> dict:
        if params.get("accept"):
            commit = self.session.accept()
            return {"commit": commit_to_jsonable(commit)}
        self.session.discard()
        return {}

    def _handle_undo(self, params: dict) -> dict:
        self.session.undo()
        return self._head_state()

    def _handle_redo(self, params: dict) -> dict:
        self.session.redo()
        return self._head_state()

    def _handle_checkout(self, params: dict) -> dict:
        self.session.checkout(params.get("id"))
        return self._head_state()

    def _handle_confirm_commit(self, params: dict) -> dict:
        commit = self.session.confirm(params.get("id"), bool(params.get("confirmed", True)))
        return {"commit": commit_to_jsonable(commit)}

    def _handle_set_message(self, params: dict) -> dict:
        commit = self.session.set_message(params.get("id"), str(params.get("message", "")))
        return {"commit": commit_to_jsonable(commit)}

    def _handle_get_metrics(self, params: dict) -> dict:
        return triple_to_jsonable(self.session.metrics(_parse_scope(params)))

    def _handle_get_correlation(self, params: dict) -> dict:
        selection = _parse_selection(params)
        entries = self.session.correlation(selection)
        model = self.session.current_model
        continuous, categorical = [], []
        for entry in entries:
            doc = ranked_to_jsonable(entry, model.term(entry.term_name))
            (continuous if entry.kind is TermKind.CONTINUOUS else categorical).append(doc)
        return {"continuous": continuous, "categorical": categorical}

    def _handle_get_history(self, params: dict) -> dict:
        history = self.session.history
        return {
            "head": history.head_id,
            "commits": [
                {**commit_to_jsonable(c), "applied": i < history.head}
                for i, c in enumerate(history.commits)
            ],
        }

    def _handle_save_model(self, params: dict) -> dict:
        result = self.session.save()
        if not result.ok:
            raise _SaveBlocked(result.unconfirmed)
        saved_to = None
        if self.save_path is not None:
            self.save_path.write_text(result.file_text, encoding="utf-8")
            saved_to = str(self.save_path)
        return {"file": result.file_text, "path": saved_to}

    def _head_state(self) -> dict:
        history = self.session.history
        return {"head": history.head_id, "can_undo": history.can_undo,
                "can_redo": history.can_redo}


class _SaveBlocked(GamEditError):
    def __init__(self, unconfirmed: tuple[str, ...]):
        super().__init__("cannot save: confirm all commits first")
        self.unconfirmed = unconfirmed

    @property
    def code(self) -> str:
        return "SaveBlocked"

    def details(self) -> dict:
        return {"unconfirmed": list(self.unconfirmed)}


def _snake(name: str) -> str:
    out = []
    for i, ch in enumerate(name):
        if ch.isupper() and i > 0:
            out.append("_")
        out.append(ch.lower())
    return "".join(out)


_CATALOG = frozenset({
    "LoadModel", "ListFeatures", "GetFeature", "PreviewEdit", "ResolvePreview",
    "Undo", "Redo", "Checkout", "ConfirmCommit", "SetMessage", "GetMetrics",
    "GetCorrelation", "GetHistory", "SaveModel",
})


def _error_envelope(code: str, message: str, details: Optional[dict] = None) -> dict:
    error = {"type": code, "message": message}
    if details:
        error.update(details)
    return {"ok": False, "error": error}
