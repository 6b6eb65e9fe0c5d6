"""Scoped performance metrics and the incremental scoring cache.

Classification models report a confusion matrix, accuracy, balanced
accuracy, and AUC; regression models report RMSE, MAE, and MAPE.  Metrics
can be computed over three scopes: every sample (global), the samples whose
value falls in a selected bin range (selected), or the samples matching one
categorical level (slice).

Because the model is additive and edits only rewrite per-bin scores, a
sample's score for an unedited term never changes.  The cache exploits
this: bin memberships are computed once per dataset, per-term contribution
columns are reused until that term's scores are replaced, and raw scores are
always re-assembled with the same row-sum so an incremental refresh is
bit-identical to a from-scratch pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .dataset import Dataset
from .edits import Selection
from .errors import InvalidSelection, UnknownSlice
from .model import GamModel, LinkFunction, TermKind, bin_indices, sigmoid_array


class ScopeKind(str, Enum):
    GLOBAL = "global"
    SELECTED = "selected"
    SLICE = "slice"


@dataclass(frozen=True)
class Scope:
    kind: ScopeKind
    selection: Optional[Selection] = None
    term_name: Optional[str] = None
    label: Optional[str] = None

    @staticmethod
    def global_() -> "Scope":
        return Scope(kind=ScopeKind.GLOBAL)

    @staticmethod
    def selected(selection: Selection) -> "Scope":
        return Scope(kind=ScopeKind.SELECTED, selection=selection)

    @staticmethod
    def slice_(term_name: str, label: str) -> "Scope":
        return Scope(kind=ScopeKind.SLICE, term_name=term_name, label=label)

    def describe(self) -> dict:
        if self.kind is ScopeKind.GLOBAL:
            return {"kind": "global"}
        if self.kind is ScopeKind.SELECTED:
            return {"kind": "selected", "term": self.selection.term_name,
                    "bins": list(self.selection.bin_indices)}
        return {"kind": "slice", "term": self.term_name, "label": self.label}


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class ClassificationMetrics:
    confusion: ConfusionMatrix
    accuracy: Optional[float]
    balanced_accuracy: Optional[float]  # None when a class is absent
    auc: Optional[float]                # None when a class is absent


@dataclass(frozen=True)
class RegressionMetrics:
    rmse: Optional[float]
    mae: Optional[float]
    mape: Optional[float]     # fraction, None when every label is zero
    mape_excluded: int        # samples left out of MAPE because label == 0


@dataclass(frozen=True)
class MetricReport:
    scope: dict
    sample_count: int
    classification: Optional[ClassificationMetrics] = None
    regression: Optional[RegressionMetrics] = None


def resolve_scope(dataset: Dataset, scope: Scope, model: GamModel) -> np.ndarray:
    """Indices of the samples a scope covers."""
    n = len(dataset)
    if scope.kind is ScopeKind.GLOBAL:
        return np.arange(n, dtype=np.int64)
    if scope.kind is ScopeKind.SELECTED:
        selection = scope.selection
        if selection is None:
            raise InvalidSelection("selected scope requires a selection")
        term = _scope_term(model, selection.term_name, InvalidSelection)
        if selection.bin_indices[-1] >= term.n_bins:
            raise InvalidSelection(
                f"bin {selection.bin_indices[-1]} out of range for term "
                f"{term.name!r} ({term.n_bins} bins)")
        member = bin_indices(term, dataset.columns[term.name])
        mask = np.isin(member, np.array(selection.bin_indices, dtype=np.int64))
        return np.flatnonzero(mask).astype(np.int64)
    term = _scope_term(model, scope.term_name, UnknownSlice)
    if term.kind is not TermKind.CATEGORICAL:
        raise UnknownSlice(f"slice scope requires a categorical term, got {term.name!r}")
    if scope.label not in term.bin_labels:
        raise UnknownSlice(f"term {term.name!r} has no level {scope.label!r}")
    column = dataset.columns[term.name]
    mask = np.array([v == scope.label for v in column], dtype=bool)
    return np.flatnonzero(mask).astype(np.int64)


def _scope_term(model, name, error_cls):
    try:
        return model.term(name)
    except KeyError:
        raise error_cls(f"unknown term {name!r}") from None


def confusion(preds: np.ndarray, labels: np.ndarray,
              threshold: float = 0.5) -> ConfusionMatrix:
    """Count outcomes with 'positive' meaning predicted probability >= threshold."""
    preds = np.asarray(preds, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if len(preds) != len(labels):
        raise ValueError("predictions and labels must have equal length")
    pred_pos = preds >= threshold
    true_pos = labels == 1.0
    return ConfusionMatrix(
        tp=int(np.sum(pred_pos & true_pos)),
        fp=int(np.sum(pred_pos & ~true_pos)),
        tn=int(np.sum(~pred_pos & ~true_pos)),
        fn=int(np.sum(~pred_pos & true_pos)),
    )


def auc_score(preds: np.ndarray, labels: np.ndarray) -> Optional[float]:
    """Probability that a random positive outranks a random negative.

    Computed as the exact Mann-Whitney statistic from average ranks, so tied
    predictions earn credit 0.5.  Returns None when either class is absent.
    """
    preds = np.asarray(preds, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    pos = labels == 1.0
    n_pos = int(pos.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        return None
    order = np.argsort(preds, kind="mergesort")
    sorted_preds = preds[order]
    new_group = np.concatenate(([True], sorted_preds[1:] != sorted_preds[:-1]))
    group_of = np.cumsum(new_group) - 1
    group_sizes = np.bincount(group_of)
    group_ends = np.cumsum(group_sizes)
    group_starts = group_ends - group_sizes
    mean_rank = 0.5 * (group_starts + 1 + group_ends)  # mean of ranks start+1 .. end
    ranks = np.empty(len(preds), dtype=np.float64)
    ranks[order] = mean_rank[group_of]
    u = float(ranks[pos].sum()) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def classification_metrics(preds: np.ndarray, labels: np.ndarray,
                           threshold: float = 0.5) -> ClassificationMetrics:
    matrix = confusion(preds, labels, threshold)
    n = matrix.total
    accuracy = (matrix.tp + matrix.tn) / n if n else None
    tpr = matrix.tp / (matrix.tp + matrix.fn) if (matrix.tp + matrix.fn) else None
    tnr = matrix.tn / (matrix.tn + matrix.fp) if (matrix.tn + matrix.fp) else None
    balanced = 0.5 * (tpr + tnr) if tpr is not None and tnr is not None else None
    return ClassificationMetrics(
        confusion=matrix,
        accuracy=accuracy,
        balanced_accuracy=balanced,
        auc=auc_score(preds, labels),
    )


def regression_metrics(preds: np.ndarray, labels: np.ndarray) -> RegressionMetrics:
    preds = np.asarray(preds, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if len(preds) != len(labels):
        raise ValueError("predictions and labels must have equal length")
    n = len(preds)
    if n == 0:
        return RegressionMetrics(rmse=None, mae=None, mape=None, mape_excluded=0)
    residuals = preds - labels
    rmse = math.sqrt(float(np.mean(residuals ** 2)))
    mae = float(np.mean(np.abs(residuals)))
    nonzero = labels != 0.0
    excluded = int(n - nonzero.sum())
    if excluded == n:
        mape = None
    else:
        mape = float(np.mean(np.abs(residuals[nonzero]) / np.abs(labels[nonzero])))
    return RegressionMetrics(rmse=rmse, mae=mae, mape=mape, mape_excluded=excluded)


def compute_report(preds: np.ndarray, labels: np.ndarray, link: LinkFunction,
                   scope: Scope, threshold: float = 0.5) -> MetricReport:
    """One scope's report for one model's predictions."""
    if link is LinkFunction.LOGIT:
        return MetricReport(
            scope=scope.describe(),
            sample_count=len(preds),
            classification=classification_metrics(preds, labels, threshold),
        )
    return MetricReport(
        scope=scope.describe(),
        sample_count=len(preds),
        regression=regression_metrics(preds, labels),
    )


class ScoringIndex:
    """Per-dataset bin memberships, shared by every model version.

    Edits replace scores but never bins, so the membership columns are
    computed once and reused by all caches and by scope resolution.
    """

    def __init__(self, model: GamModel, dataset: Dataset):
        self.dataset = dataset
        self.term_bins: dict[str, np.ndarray] = {
            term.name: bin_indices(term, dataset.columns[term.name])
            for term in model.terms
        }

    def membership(self, term_name: str) -> np.ndarray:
        return self.term_bins[term_name]

    def selected_indices(self, selection: Selection) -> np.ndarray:
        member = self.term_bins[selection.term_name]
        mask = np.isin(member, np.array(selection.bin_indices, dtype=np.int64))
        return np.flatnonzero(mask).astype(np.int64)


class PredictionCache:
    """Raw scores for one evolving model over a fixed dataset.

    Holds one contribution column per term (plus one per interaction).  On
    ``sync`` only columns whose term scores were replaced are recomputed;
    the raw-score vector is then rebuilt with the same row-sum a full pass
    would use, so results never depend on the update path.
    """

    def __init__(self, model: GamModel, index: ScoringIndex):
        self._index = index
        n = len(index.dataset)
        k = len(model.terms) + len(model.interactions)
        self._columns = np.zeros((n, k), dtype=np.float64)
        self._sources: list[Optional[np.ndarray]] = [None] * len(model.terms)
        self._intercept = math.nan
        self._raw: Optional[np.ndarray] = None
        for j, inter in enumerate(model.interactions):
            ia = index.membership(inter.feature_a)
            ib = index.membership(inter.feature_b)
            self._columns[:, len(model.terms) + j] = inter.scores[ia, ib]
        self.sync(model)

    def sync(self, model: GamModel) -> None:
        changed = False
        for j, term in enumerate(model.terms):
            if self._sources[j] is not term.scores:
                self._columns[:, j] = term.scores[self._index.membership(term.name)]
                self._sources[j] = term.scores
                changed = True
        if changed or self._raw is None or model.intercept != self._intercept:
            self._intercept = model.intercept
            self._raw = model.intercept + self._columns.sum(axis=1)
            self._raw.setflags(write=False)

    @property
    def raw(self) -> np.ndarray:
        return self._raw

    def predictions(self, link: LinkFunction) -> np.ndarray:
        if link is LinkFunction.LOGIT:
            return sigmoid_array(self._raw)
        return self._raw
