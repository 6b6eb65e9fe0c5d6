"""Linking+reordering: rank features by how unusual the selected samples look.

For each feature other than the selected one, compare the bin-frequency
distribution of the selection-affected samples against the distribution of
the whole dataset.  A large l2 distance between the two frequency vectors
means the affected samples are concentrated in atypical bins, i.e. the
feature is locally correlated with the selected region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dataset import Dataset
from .edits import Selection
from .metrics import Scope, ScoringIndex, resolve_scope
from .model import FeatureTerm, GamModel, TermKind, bin_indices


@dataclass(frozen=True)
class FrequencyVector:
    """Per-bin share of a sample set; zeros with ``is_empty`` for no samples."""

    term_name: str
    frequencies: np.ndarray
    is_empty: bool = False

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=np.float64)
        freqs.setflags(write=False)
        object.__setattr__(self, "frequencies", freqs)


@dataclass(frozen=True)
class RankedFeature:
    term_name: str
    kind: TermKind
    distance: float
    full: FrequencyVector
    selected: FrequencyVector


def affected_samples(dataset: Dataset, selection: Selection,
                     model: GamModel) -> np.ndarray:
    """Indices of samples whose value falls in a selected bin."""
    return resolve_scope(dataset, Scope.selected(selection), model)


def frequency_vector(term: FeatureTerm, values: np.ndarray) -> FrequencyVector:
    """Bin-occupancy frequencies of the given feature values."""
    if len(values) == 0:
        return FrequencyVector(term_name=term.name,
                               frequencies=np.zeros(term.n_bins),
                               is_empty=True)
    member = bin_indices(term, values)
    occupancy = np.bincount(member, minlength=term.n_bins).astype(np.float64)
    return FrequencyVector(term_name=term.name, frequencies=occupancy / len(values))


def _frequency_from_membership(term: FeatureTerm, member: np.ndarray) -> FrequencyVector:
    if len(member) == 0:
        return FrequencyVector(term_name=term.name,
                               frequencies=np.zeros(term.n_bins),
                               is_empty=True)
    occupancy = np.bincount(member, minlength=term.n_bins).astype(np.float64)
    return FrequencyVector(term_name=term.name, frequencies=occupancy / len(member))


def l2_distance(full: FrequencyVector, selected: FrequencyVector) -> float:
    if selected.is_empty or full.is_empty:
        return 0.0
    return math.sqrt(float(np.sum((full.frequencies - selected.frequencies) ** 2)))


def ranking(model: GamModel, dataset: Dataset, selection: Selection,
            index: Optional[ScoringIndex] = None) -> tuple[RankedFeature, ...]:
    """All other features ordered by distance, largest first.

    Ties break lexicographically by term name; empty selections rank after
    non-empty ones at the same distance.  The selection's own term is
    excluded.
    """
    if index is None:
        index = ScoringIndex(model, dataset)
    affected = index.selected_indices(selection)
    entries = []
    for term in model.terms:
        if term.name == selection.term_name:
            continue
        member = index.membership(term.name)
        full = _frequency_from_membership(term, member)
        sel = _frequency_from_membership(term, member[affected])
        entries.append(RankedFeature(
            term_name=term.name,
            kind=term.kind,
            distance=l2_distance(full, sel),
            full=full,
            selected=sel,
        ))
    entries.sort(key=lambda e: (-e.distance, e.selected.is_empty, e.term_name))
    return tuple(entries)
