"""One interactive editing session: staged previews, commits, and live reports.

A session owns the only mutable state in the system: the current model, the
single staging slot, and the history.  Reads hand out immutable snapshots,
so a server can answer queries concurrently while mutations are serialized
by the caller.

Metric reports always cover three model versions: the original (session
start), the previous one (before the in-flight or most recent change), and
the current one (the staged preview when present, otherwise the committed
head).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .correlation import RankedFeature, ranking
from .dataset import Dataset
from .edits import EditDiff, EditOp, Selection, apply_edit
from .errors import EmptyDiff, GamEditError, NoStagedEdit, StagedEditPending
from .history import HistoryState, SaveGate, auto_message
from .metrics import (
    MetricReport,
    PredictionCache,
    Scope,
    ScoringIndex,
    compute_report,
    resolve_scope,
)
from .model import GamModel, feature_importance
from .serialize import save_model


@dataclass(frozen=True)
class StagedEdit:
    op: EditOp
    model: GamModel
    diff: EditDiff


@dataclass(frozen=True)
class ReportTriple:
    original: MetricReport
    previous: MetricReport
    current: MetricReport


@dataclass(frozen=True)
class SaveResult:
    ok: bool
    unconfirmed: tuple[str, ...]
    file_text: Optional[str] = None


class EditorSession:
    def __init__(self, model: GamModel, dataset: Optional[Dataset] = None, *,
                 history: Optional[HistoryState] = None,
                 threshold: float = 0.5):
        self.history = history if history is not None else HistoryState(model)
        self.model: GamModel = model
        self.staged: Optional[StagedEdit] = None
        self.dataset = dataset
        self.threshold = float(threshold)
        self._index: Optional[ScoringIndex] = None
        self._caches: dict[str, PredictionCache] = {}
        if dataset is not None:
            self._index = ScoringIndex(model, dataset)

    # -- model versions ----------------------------------------------------

    @property
    def original_model(self) -> GamModel:
        return self.history.original_model

    @property
    def current_model(self) -> GamModel:
        return self.staged.model if self.staged is not None else self.model

    @property
    def previous_model(self) -> GamModel:
        """The version just before the in-flight (or latest) change."""
        if self.staged is not None:
            return self.model
        if self.history.head > 0:
            return self.history.model_at(self.history.head - 1)
        return self.original_model

    # -- editing -----------------------------------------------------------

    def preview(self, op: EditOp) -> StagedEdit:
        """Stage an edit without committing it; only one may be pending."""
        if self.staged is not None:
            raise StagedEditPending()
        edited, diff = apply_edit(self.model, op)
        self.staged = StagedEdit(op=op, model=edited, diff=diff)
        return self.staged

    def accept(self) -> "Commit":
        """Turn the staged edit into a commit; rejected when it changes nothing."""
        if self.staged is None:
            raise NoStagedEdit()
        staged = self.staged
        if staged.diff.is_noop:
            raise EmptyDiff("staged edit does not change any score")
        term = self.model.term(staged.op.selection.term_name)
        commit = self.history.commit(staged.diff, staged.model,
                                     message=auto_message(staged.op, term))
        self.model = staged.model
        self.staged = None
        return commit

    def discard(self) -> None:
        if self.staged is None:
            raise NoStagedEdit()
        self.staged = None

    def undo(self) -> GamModel:
        if self.staged is not None:
            raise StagedEditPending()
        self.model = self.history.undo(self.model)
        return self.model

    def redo(self) -> GamModel:
        if self.staged is not None:
            raise StagedEditPending()
        self.model = self.history.redo(self.model)
        return self.model

    def checkout(self, commit_id: str) -> GamModel:
        if self.staged is not None:
            raise StagedEditPending()
        self.model = self.history.checkout(commit_id, self.model)
        return self.model

    def confirm(self, commit_id: str, confirmed: bool = True):
        return self.history.confirm(commit_id, confirmed)

    def set_message(self, commit_id: str, message: str):
        return self.history.set_message(commit_id, message)

    # -- reports -----------------------------------------------------------

    def _require_dataset(self) -> Dataset:
        if self.dataset is None:
            raise GamEditError("session has no dataset; load one to compute reports")
        return self.dataset

    def _cache_for(self, role: str, model: GamModel) -> PredictionCache:
        cache = self._caches.get(role)
        if cache is None:
            cache = PredictionCache(model, self._index)
            self._caches[role] = cache
        else:
            cache.sync(model)
        return cache

    def metrics(self, scope: Scope) -> ReportTriple:
        """Original/previous/current reports over one scope."""
        dataset = self._require_dataset()
        indices = resolve_scope(dataset, scope, self.model)
        labels = dataset.labels[indices]
        link = self.model.link
        reports = {}
        for role, model in (("original", self.original_model),
                            ("previous", self.previous_model),
                            ("current", self.current_model)):
            preds = self._cache_for(role, model).predictions(link)[indices]
            reports[role] = compute_report(preds, labels, link, scope, self.threshold)
        return ReportTriple(**reports)

    def correlation(self, selection: Selection) -> tuple[RankedFeature, ...]:
        dataset = self._require_dataset()
        return ranking(self.current_model, dataset, selection, index=self._index)

    def scope_indices(self, scope: Scope):
        return resolve_scope(self._require_dataset(), scope, self.model)

    # -- summaries ---------------------------------------------------------

    def feature_summaries(self) -> list[dict]:
        """Name, kind, bin count, and importance per term, most important first."""
        rows = []
        for term in self.current_model.terms:
            total = int(term.counts.sum())
            importance = feature_importance(term) if total > 0 else 0.0
            rows.append({
                "name": term.name,
                "kind": term.kind.value,
                "n_bins": term.n_bins,
                "importance": importance,
            })
        rows.sort(key=lambda r: (-r["importance"], r["name"]))
        return rows

    # -- persistence -------------------------------------------------------

    def save(self) -> SaveResult:
        """Serialize the head model with history, gated on confirmed commits."""
        gate: SaveGate = self.history.save_gate()
        if not gate.ok:
            return SaveResult(ok=False, unconfirmed=gate.unconfirmed)
        return SaveResult(ok=True, unconfirmed=(),
                          file_text=save_model(self.model, self.history))
