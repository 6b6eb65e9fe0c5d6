"""Binned GAM representation and inference.

A model is an intercept plus one piecewise-constant shape function per
feature, combined through a link function:

    link(prediction) = intercept + sum_j scores_j[bin of x_j] (+ interactions)

Continuous features are discretized into bins identified by their left
edges; categorical features carry one bin per label.  Models are immutable:
every editing operation produces a new value, so snapshots can be shared
freely across threads and history states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Iterable, Optional, Union

import numpy as np

from .errors import DegenerateCounts, UnknownCategory

#: Sentinel label for a missing categorical value.  A term that wants to
#: score missing values simply includes this label among its bins; otherwise
#: a missing value is an unknown category.
MISSING = ""


class LinkFunction(str, Enum):
    """Logit for binary classification (labels in {0,1}), identity for regression."""

    LOGIT = "logit"
    IDENTITY = "identity"


class TermKind(str, Enum):
    CONTINUOUS = "continuous"
    CATEGORICAL = "categorical"


def _frozen_f64(values: Iterable[float]) -> np.ndarray:
    arr = np.array(list(values) if not isinstance(values, np.ndarray) else values,
                   dtype=np.float64)
    arr.setflags(write=False)
    return arr


def _frozen_i64(values: Iterable[int]) -> np.ndarray:
    arr = np.array(list(values) if not isinstance(values, np.ndarray) else values,
                   dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FeatureTerm:
    """One shape function: bins, per-bin scores, and per-bin training counts.

    ``scores`` are contribution values in link units (log odds under the
    logit link, target units under identity).  ``counts`` record how many
    training samples fell into each bin and weight several edit operators.
    ``score_stddev``, when present, is a non-negative per-bin confidence band
    used only for display.
    """

    name: str
    kind: TermKind
    scores: np.ndarray
    counts: np.ndarray
    bin_edges: Optional[np.ndarray] = None
    bin_labels: Optional[tuple[str, ...]] = None
    score_stddev: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("term name must be non-empty")
        kind = TermKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "scores", _frozen_f64(self.scores))
        object.__setattr__(self, "counts", _frozen_i64(self.counts))
        n = len(self.scores)
        if n < 1:
            raise ValueError(f"term {self.name!r} must have at least one bin")
        if kind is TermKind.CONTINUOUS:
            if self.bin_edges is None or self.bin_labels is not None:
                raise ValueError(f"continuous term {self.name!r} requires bin_edges only")
            edges = _frozen_f64(self.bin_edges)
            if len(edges) != n:
                raise ValueError(f"term {self.name!r}: {len(edges)} edges for {n} scores")
            if not np.all(np.isfinite(edges)):
                raise ValueError(f"term {self.name!r}: bin edges must be finite")
            if n > 1 and not np.all(np.diff(edges) > 0):
                raise ValueError(f"term {self.name!r}: bin edges must be strictly increasing")
            object.__setattr__(self, "bin_edges", edges)
        else:
            if self.bin_labels is None or self.bin_edges is not None:
                raise ValueError(f"categorical term {self.name!r} requires bin_labels only")
            labels = tuple(str(v) for v in self.bin_labels)
            if len(labels) != n:
                raise ValueError(f"term {self.name!r}: {len(labels)} labels for {n} scores")
            if len(set(labels)) != len(labels):
                raise ValueError(f"term {self.name!r}: bin labels must be unique")
            object.__setattr__(self, "bin_labels", labels)
        if len(self.counts) != n:
            raise ValueError(f"term {self.name!r}: {len(self.counts)} counts for {n} scores")
        if np.any(self.counts < 0):
            raise ValueError(f"term {self.name!r}: counts must be non-negative")
        if not np.all(np.isfinite(self.scores)):
            raise ValueError(f"term {self.name!r}: scores must be finite")
        if self.score_stddev is not None:
            dev = _frozen_f64(self.score_stddev)
            if len(dev) != n:
                raise ValueError(f"term {self.name!r}: stddev length mismatch")
            if np.any(dev < 0) or not np.all(np.isfinite(dev)):
                raise ValueError(f"term {self.name!r}: stddev must be finite and non-negative")
            object.__setattr__(self, "score_stddev", dev)

    @property
    def n_bins(self) -> int:
        return len(self.scores)

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.bin_labels or ())}

    def replace_scores(self, scores: Iterable[float]) -> "FeatureTerm":
        """New term with the same bins and counts but different scores."""
        return replace(self, scores=_frozen_f64(scores))


@dataclass(frozen=True)
class InteractionTerm:
    """Pairwise score grid indexed by (bin of feature_a, bin of feature_b).

    Interactions participate in inference and metrics but are never editable.
    """

    feature_a: str
    feature_b: str
    scores: np.ndarray

    def __post_init__(self):
        grid = np.array(self.scores, dtype=np.float64)
        if grid.ndim != 2:
            raise ValueError(f"interaction {self.name!r}: score grid must be 2-D")
        if not np.all(np.isfinite(grid)):
            raise ValueError(f"interaction {self.name!r}: scores must be finite")
        grid.setflags(write=False)
        object.__setattr__(self, "scores", grid)

    @property
    def name(self) -> str:
        return f"{self.feature_a} x {self.feature_b}"


#: A single feature value: a real for continuous terms, a label for
#: categorical terms (``MISSING`` when absent).
FeatureValue = Union[float, str]


@dataclass(frozen=True)
class Sample:
    """One validation sample: feature values in model term order plus a label."""

    values: tuple[FeatureValue, ...]
    label: float


@dataclass(frozen=True)
class GamModel:
    intercept: float
    link: LinkFunction
    terms: tuple[FeatureTerm, ...]
    interactions: tuple[InteractionTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "link", LinkFunction(self.link))
        object.__setattr__(self, "intercept", float(self.intercept))
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "interactions", tuple(self.interactions))
        names = [t.name for t in self.terms]
        if len(set(names)) != len(names):
            raise ValueError("term names must be unique")
        by_name = {t.name: t for t in self.terms}
        for inter in self.interactions:
            for ref in (inter.feature_a, inter.feature_b):
                if ref not in by_name:
                    raise ValueError(f"interaction references unknown term {ref!r}")
            shape = (by_name[inter.feature_a].n_bins, by_name[inter.feature_b].n_bins)
            if inter.scores.shape != shape:
                raise ValueError(
                    f"interaction {inter.name!r}: grid shape {inter.scores.shape} "
                    f"does not match term bins {shape}")

    @property
    def feature_count(self) -> int:
        return len(self.terms)

    @cached_property
    def _term_index(self) -> dict[str, int]:
        return {t.name: i for i, t in enumerate(self.terms)}

    def term(self, name: str) -> FeatureTerm:
        try:
            return self.terms[self._term_index[name]]
        except KeyError:
            raise KeyError(f"model has no term named {name!r}") from None

    def term_position(self, name: str) -> int:
        try:
            return self._term_index[name]
        except KeyError:
            raise KeyError(f"model has no term named {name!r}") from None

    def with_term(self, position: int, term: FeatureTerm) -> "GamModel":
        terms = list(self.terms)
        if term.name != terms[position].name:
            raise ValueError("replacement term must keep its name")
        terms[position] = term
        return replace(self, terms=tuple(terms))

    def with_intercept(self, intercept: float) -> "GamModel":
        return replace(self, intercept=float(intercept))


def bin_index(term: FeatureTerm, value: FeatureValue) -> int:
    """Map a feature value to its bin.

    Continuous: the bin whose left edge is the largest one <= value; values
    below the first edge clamp to bin 0 and values at or past the last edge
    clamp to the last bin, so every finite real maps somewhere.  Categorical:
    the bin of the matching label; a label the term does not know falls back
    to the MISSING bin when one exists and is an error otherwise.
    """
    if term.kind is TermKind.CONTINUOUS:
        v = float(value)
        if math.isnan(v):
            raise ValueError(f"term {term.name!r}: NaN is not a valid feature value")
        idx = int(np.searchsorted(term.bin_edges, v, side="right")) - 1
        return min(max(idx, 0), term.n_bins - 1)
    label = str(value)
    mapping = term._label_index
    idx = mapping.get(label)
    if idx is None:
        idx = mapping.get(MISSING)
        if idx is None:
            raise UnknownCategory(term.name, label)
    return idx


def bin_indices(term: FeatureTerm, values: np.ndarray) -> np.ndarray:
    """Vectorized :func:`bin_index` over a column of feature values."""
    if term.kind is TermKind.CONTINUOUS:
        col = np.asarray(values, dtype=np.float64)
        if np.isnan(col).any():
            raise ValueError(f"term {term.name!r}: NaN is not a valid feature value")
        idx = np.searchsorted(term.bin_edges, col, side="right") - 1
        return np.clip(idx, 0, term.n_bins - 1).astype(np.int64)
    mapping = term._label_index
    fallback = mapping.get(MISSING)
    out = np.empty(len(values), dtype=np.int64)
    for i, label in enumerate(values):
        idx = mapping.get(str(label), fallback)
        if idx is None:
            raise UnknownCategory(term.name, str(label))
        out[i] = idx
    return out


def raw_score(model: GamModel, sample: Sample) -> float:
    """Link-scale score: intercept plus all shape-function and interaction lookups."""
    if len(sample.values) != model.feature_count:
        raise ValueError(
            f"sample has {len(sample.values)} values for {model.feature_count} features")
    bins = [bin_index(term, value) for term, value in zip(model.terms, sample.values)]
    total = model.intercept
    for term, b in zip(model.terms, bins):
        total += float(term.scores[b])
    for inter in model.interactions:
        ia = bins[model.term_position(inter.feature_a)]
        ib = bins[model.term_position(inter.feature_b)]
        total += float(inter.scores[ia, ib])
    return total


def sigmoid(x: float) -> float:
    """Numerically stable logistic function."""
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def sigmoid_array(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def predict(model: GamModel, sample: Sample) -> float:
    """Model prediction: probability in (0,1) under logit, raw value under identity."""
    raw = raw_score(model, sample)
    if model.link is LinkFunction.LOGIT:
        return sigmoid(raw)
    return raw


def recenter(model: GamModel) -> GamModel:
    """Shift every term so its count-weighted mean score is zero.

    The subtracted means are absorbed into the intercept, leaving every
    sample's raw score unchanged up to float rounding.  Interaction grids are
    left untouched.
    """
    new_terms = []
    intercept = model.intercept
    for term in model.terms:
        weights = term.counts.astype(np.float64)
        total = float(weights.sum())
        if total <= 0:
            raise DegenerateCounts(f"term {term.name!r} has zero total count")
        mean = float(np.dot(weights, term.scores) / total)
        if mean == 0.0:
            new_terms.append(term)
        else:
            new_terms.append(term.replace_scores(term.scores - mean))
        intercept += mean
    return replace(model, intercept=intercept, terms=tuple(new_terms))


def feature_importance(term: FeatureTerm) -> float:
    """Count-weighted average of absolute contribution scores."""
    weights = term.counts.astype(np.float64)
    total = float(weights.sum())
    if total <= 0:
        raise DegenerateCounts(f"term {term.name!r} has zero total count")
    return float(np.dot(weights, np.abs(term.scores)) / total)
