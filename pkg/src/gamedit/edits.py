"""Selection-based editing operators for shape functions.

Each operator takes the scores of the selected bins and produces replacement
scores; :func:`apply_edit` wires an operator to a model and returns the new
model together with an :class:`EditDiff` recording exactly what changed.
Operators never touch bins outside the selection, other terms, or the
intercept.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import (
    DegenerateCounts,
    DegenerateGeometry,
    InteractionNotEditable,
    InvalidSelection,
)
from .model import FeatureTerm, GamModel, TermKind

#: Stand-in weight for zero-count bins so weighted pooling stays well-defined
#: in sparse regions without letting empty bins dominate.
ZERO_COUNT_WEIGHT = 1e-9


class EditTool(str, Enum):
    MOVE = "move"
    INTERPOLATE = "interpolate"
    MONOTONIZE = "monotonize"
    ALIGN = "align"
    DELETE = "delete"


class InterpolateMode(str, Enum):
    LINEAR = "linear"
    EQUAL_BINS = "equal_bins"
    REGRESSION = "regression"


class Direction(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


class Anchor(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    WEIGHTED_MEAN = "weighted_mean"


@dataclass(frozen=True)
class Selection:
    """A set of bins on one term, the unit of editing.

    Indices are kept sorted and duplicate-free.  Continuous terms additionally
    require a contiguous index range (checked against the model, which knows
    the term kind).
    """

    term_name: str
    bin_indices: tuple[int, ...]

    def __post_init__(self):
        indices = tuple(int(i) for i in self.bin_indices)
        if not indices:
            raise InvalidSelection("selection must contain at least one bin")
        if any(i < 0 for i in indices):
            raise InvalidSelection("bin indices must be non-negative")
        if len(set(indices)) != len(indices):
            raise InvalidSelection("bin indices must be duplicate-free")
        object.__setattr__(self, "bin_indices", tuple(sorted(indices)))

    @property
    def size(self) -> int:
        return len(self.bin_indices)

    @property
    def is_contiguous(self) -> bool:
        lo, hi = self.bin_indices[0], self.bin_indices[-1]
        return hi - lo + 1 == len(self.bin_indices)


@dataclass(frozen=True)
class EditOp:
    """One toolbar action: a tool, its parameters, and the selection it acts on."""

    tool: EditTool
    selection: Selection
    delta: Optional[float] = None           # move
    mode: Optional[InterpolateMode] = None  # interpolate
    segments: Optional[int] = None          # interpolate equal_bins
    direction: Optional[Direction] = None   # monotonize
    anchor: Optional[Anchor] = None         # align

    def __post_init__(self):
        object.__setattr__(self, "tool", EditTool(self.tool))
        if self.tool is EditTool.MOVE:
            if self.delta is None:
                raise InvalidSelection("move requires a delta")
            object.__setattr__(self, "delta", float(self.delta))
        elif self.tool is EditTool.INTERPOLATE:
            mode = InterpolateMode(self.mode or InterpolateMode.LINEAR)
            object.__setattr__(self, "mode", mode)
            if mode is InterpolateMode.EQUAL_BINS:
                if self.segments is None or int(self.segments) < 1:
                    raise InvalidSelection("equal_bins requires at least one segment")
                if int(self.segments) > self.selection.size:
                    raise InvalidSelection(
                        "equal_bins segment count cannot exceed the selection size")
                object.__setattr__(self, "segments", int(self.segments))
        elif self.tool is EditTool.MONOTONIZE:
            if self.direction is None:
                raise InvalidSelection("monotonize requires a direction")
            object.__setattr__(self, "direction", Direction(self.direction))
        elif self.tool is EditTool.ALIGN:
            if self.anchor is None:
                raise InvalidSelection("align requires an anchor")
            object.__setattr__(self, "anchor", Anchor(self.anchor))


@dataclass(frozen=True)
class EditDiff:
    """Old and new scores at the selected bins of one term."""

    term_name: str
    bin_indices: tuple[int, ...]
    old_scores: tuple[float, ...]
    new_scores: tuple[float, ...]

    def __post_init__(self):
        if not (len(self.bin_indices) == len(self.old_scores) == len(self.new_scores)):
            raise ValueError("diff index and score lists must have equal length")

    @property
    def is_noop(self) -> bool:
        return self.old_scores == self.new_scores


def _effective_weights(counts: np.ndarray) -> np.ndarray:
    """Counts as float weights, with zero-count bins bumped to a tiny epsilon."""
    weights = counts.astype(np.float64)
    if float(weights.sum()) <= 0.0:
        raise DegenerateCounts("all selected bins have zero training count")
    return np.where(weights > 0, weights, ZERO_COUNT_WEIGHT)


def monotonize(scores, weights, direction: Direction | str) -> np.ndarray:
    """Weighted least-squares projection onto monotone sequences.

    Pool-adjacent-violators: scan left to right, pooling adjacent blocks
    whenever their fitted values are out of order; pooled blocks take the
    weighted mean of their members.  Already-monotone input comes back
    bit-identical because no pooling occurs.  The decreasing direction is
    negate, fit increasing, negate.
    """
    scores = np.asarray(scores, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if len(scores) != len(weights):
        raise ValueError("scores and weights must have equal length")
    if np.any(weights < 0):
        raise ValueError("weights must be non-negative")
    if float(weights.sum()) <= 0.0:
        raise DegenerateCounts("monotonize requires positive total weight")
    weights = np.where(weights > 0, weights, ZERO_COUNT_WEIGHT)
    if Direction(direction) is Direction.DECREASING:
        return -_pava_increasing(-scores, weights)
    return _pava_increasing(scores, weights)


def _pava_increasing(scores: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # Blocks are (mean, weight, length); singleton means are the raw scores,
    # so untouched entries survive bit-for-bit.
    blocks: list[list[float]] = []
    for s, w in zip(scores, weights):
        blocks.append([float(s), float(w), 1])
        while len(blocks) >= 2 and blocks[-2][0] > blocks[-1][0]:
            m2, w2, n2 = blocks.pop()
            m1, w1, n1 = blocks.pop()
            total = w1 + w2
            blocks.append([(w1 * m1 + w2 * m2) / total, total, n1 + n2])
    return np.repeat([b[0] for b in blocks], [b[2] for b in blocks])


def _line(x0: float, y0: float, x1: float, y1: float, x: np.ndarray) -> np.ndarray:
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def interpolate(left_edges, scores, counts, mode: InterpolateMode | str,
                segments: Optional[int] = None) -> np.ndarray:
    """Replace selected scores with values from a fitted line.

    ``linear`` draws the line through the first and last selected points and
    evaluates it at every bin's left edge (endpoints are preserved exactly).
    ``equal_bins`` splits the selected x-range into ``segments`` equal-width
    pieces and assigns each bin the line's value at its segment midpoint,
    coarsening the region into a step function.  ``regression`` fits a
    count-weighted least-squares line through all selected points.
    """
    x = np.asarray(left_edges, dtype=np.float64)
    y = np.asarray(scores, dtype=np.float64)
    counts = np.asarray(counts)
    mode = InterpolateMode(mode)
    if len(x) < 2:
        raise InvalidSelection("interpolation requires at least two bins")
    if x[-1] == x[0]:
        raise DegenerateGeometry("selected bins span a zero-width x-range")

    if mode is InterpolateMode.LINEAR:
        out = _line(x[0], y[0], x[-1], y[-1], x)
        out[0] = y[0]
        out[-1] = y[-1]
        return out

    if mode is InterpolateMode.EQUAL_BINS:
        n = int(segments if segments is not None else 1)
        if n < 1:
            raise InvalidSelection("equal_bins requires at least one segment")
        width = (x[-1] - x[0]) / n
        seg = np.minimum(((x - x[0]) / width).astype(np.int64), n - 1)
        midpoints = x[0] + (seg + 0.5) * width
        return _line(x[0], y[0], x[-1], y[-1], midpoints)

    # Count-weighted ordinary least squares over (left edge, score).
    w = _effective_weights(counts)
    total = w.sum()
    x_mean = float(np.dot(w, x) / total)
    y_mean = float(np.dot(w, y) / total)
    sxx = float(np.dot(w, (x - x_mean) ** 2))
    if sxx == 0.0:
        raise DegenerateGeometry("selected bin edges coincide")
    slope = float(np.dot(w, (x - x_mean) * (y - y_mean))) / sxx
    return y_mean + slope * (x - x_mean)


def align(scores, counts, anchor: Anchor | str) -> np.ndarray:
    """Set every selected score to one anchor value."""
    y = np.asarray(scores, dtype=np.float64)
    anchor = Anchor(anchor)
    if anchor is Anchor.LEFT:
        value = y[0]
    elif anchor is Anchor.RIGHT:
        value = y[-1]
    else:
        w = _effective_weights(np.asarray(counts))
        value = float(np.dot(w, y) / w.sum())
    return np.full_like(y, value)


def _resolve_editable_term(model: GamModel, selection: Selection) -> tuple[int, FeatureTerm]:
    name = selection.term_name
    try:
        position = model.term_position(name)
    except KeyError:
        for inter in model.interactions:
            if name == inter.name:
                raise InteractionNotEditable(
                    f"interaction {name!r} is read-only; only univariate terms are editable"
                ) from None
        raise InvalidSelection(f"unknown term {name!r}") from None
    term = model.terms[position]
    if selection.bin_indices[-1] >= term.n_bins:
        raise InvalidSelection(
            f"bin {selection.bin_indices[-1]} out of range for term {name!r} "
            f"({term.n_bins} bins)")
    if term.kind is TermKind.CONTINUOUS and not selection.is_contiguous:
        raise InvalidSelection("continuous selections must be a contiguous bin range")
    return position, term


def apply_edit(model: GamModel, op: EditOp) -> tuple[GamModel, EditDiff]:
    """Apply one operator, returning the edited model and the exact diff.

    The input model is never mutated; the result differs from it only at the
    selected bins of the selected term.
    """
    position, term = _resolve_editable_term(model, op.selection)
    idx = np.array(op.selection.bin_indices, dtype=np.int64)
    old = term.scores[idx]
    counts = term.counts[idx]

    if op.tool is EditTool.DELETE:
        new = np.zeros_like(old)
    elif op.tool is EditTool.MOVE:
        new = old + op.delta
    elif op.tool is EditTool.ALIGN:
        new = align(old, counts, op.anchor)
    elif op.tool is EditTool.MONOTONIZE:
        if term.kind is not TermKind.CONTINUOUS:
            raise InvalidSelection("monotonize requires an ordered axis; "
                                   f"term {term.name!r} is categorical")
        new = monotonize(old, counts, op.direction)
    else:
        if term.kind is not TermKind.CONTINUOUS:
            raise InvalidSelection("interpolate requires an ordered axis; "
                                   f"term {term.name!r} is categorical")
        if op.selection.size < 2:
            raise InvalidSelection("interpolation requires at least two selected bins")
        edges = term.bin_edges[idx]
        new = interpolate(edges, old, counts, op.mode, op.segments)

    scores = np.array(term.scores)
    scores[idx] = new
    edited = model.with_term(position, term.replace_scores(scores))
    diff = EditDiff(
        term_name=term.name,
        bin_indices=op.selection.bin_indices,
        old_scores=tuple(float(v) for v in old),
        new_scores=tuple(float(v) for v in new),
    )
    return edited, diff


def apply_diff(model: GamModel, diff: EditDiff, *, reverse: bool = False) -> GamModel:
    """Write a diff's recorded scores back into a model.

    Forward replay writes ``new_scores``; ``reverse=True`` restores
    ``old_scores``.  Both directions are exact because diffs store absolute
    values, not deltas.
    """
    position = model.term_position(diff.term_name)
    term = model.terms[position]
    scores = np.array(term.scores)
    values = diff.old_scores if reverse else diff.new_scores
    scores[list(diff.bin_indices)] = values
    return model.with_term(position, term.replace_scores(scores))
