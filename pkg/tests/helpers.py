"""Random model, dataset, and edit generators shared across tests."""

import string

import numpy as np

from gamedit import (
    Anchor,
    Dataset,
    Direction,
    EditOp,
    EditTool,
    FeatureTerm,
    GamModel,
    InteractionTerm,
    InterpolateMode,
    LinkFunction,
    Selection,
    TermKind,
)


def random_term(rng: np.random.Generator, name: str, kind=None, max_bins=8,
                min_bins=1, with_stddev=False) -> FeatureTerm:
    if kind is None:
        kind = TermKind.CONTINUOUS if rng.random() < 0.6 else TermKind.CATEGORICAL
    n = int(rng.integers(min_bins, max_bins + 1))
    scores = rng.normal(0.0, 1.0, size=n)
    counts = rng.integers(0, 200, size=n)
    if counts.sum() == 0:
        counts[int(rng.integers(0, n))] = 1
    stddev = np.abs(rng.normal(0.0, 0.2, size=n)) if with_stddev else None
    if kind is TermKind.CONTINUOUS:
        edges = np.sort(rng.choice(np.arange(-50, 50), size=n, replace=False)).astype(float)
        return FeatureTerm(name=name, kind=kind, scores=scores, counts=counts,
                           bin_edges=edges, score_stddev=stddev)
    labels = tuple(f"{letter}{i}" for i, letter in
                   zip(range(n), string.ascii_lowercase * 3))
    return FeatureTerm(name=name, kind=kind, scores=scores, counts=counts,
                       bin_labels=labels, score_stddev=stddev)


def random_model(rng: np.random.Generator, n_terms=4, max_bins=8, min_bins=1,
                 link=LinkFunction.LOGIT, with_interactions=False,
                 with_stddev=False) -> GamModel:
    terms = tuple(
        random_term(rng, f"f{j}", max_bins=max_bins, min_bins=min_bins,
                    with_stddev=with_stddev)
        for j in range(n_terms)
    )
    interactions = ()
    if with_interactions and n_terms >= 2:
        a, b = terms[0], terms[1]
        grid = rng.normal(0.0, 0.3, size=(a.n_bins, b.n_bins))
        interactions = (InteractionTerm(feature_a=a.name, feature_b=b.name, scores=grid),)
    return GamModel(intercept=float(rng.normal()), link=link, terms=terms,
                    interactions=interactions)


def random_dataset(rng: np.random.Generator, model: GamModel, n=50) -> Dataset:
    columns = {}
    for term in model.terms:
        if term.kind is TermKind.CONTINUOUS:
            low = float(term.bin_edges[0]) - 5.0
            high = float(term.bin_edges[-1]) + 5.0
            columns[term.name] = rng.uniform(low, high, size=n)
        else:
            columns[term.name] = np.array(
                [term.bin_labels[i] for i in rng.integers(0, term.n_bins, size=n)],
                dtype=object)
    if model.link is LinkFunction.LOGIT:
        labels = rng.integers(0, 2, size=n).astype(np.float64)
    else:
        labels = rng.normal(0.0, 2.0, size=n)
    return Dataset(columns=columns, labels=labels,
                   term_order=tuple(t.name for t in model.terms))


def random_selection(rng: np.random.Generator, model: GamModel,
                     term=None) -> Selection:
    if term is None:
        term = model.terms[int(rng.integers(0, len(model.terms)))]
    if term.kind is TermKind.CONTINUOUS:
        lo = int(rng.integers(0, term.n_bins))
        hi = int(rng.integers(lo, term.n_bins))
        indices = tuple(range(lo, hi + 1))
    else:
        size = int(rng.integers(1, term.n_bins + 1))
        indices = tuple(sorted(rng.choice(term.n_bins, size=size, replace=False).tolist()))
    return Selection(term_name=term.name, bin_indices=indices)


def random_edit_op(rng: np.random.Generator, model: GamModel) -> EditOp:
    term = model.terms[int(rng.integers(0, len(model.terms)))]
    selection = random_selection(rng, model, term=term)
    if term.kind is TermKind.CONTINUOUS and selection.size >= 2:
        tools = [EditTool.MOVE, EditTool.DELETE, EditTool.ALIGN,
                 EditTool.MONOTONIZE, EditTool.INTERPOLATE]
    else:
        tools = [EditTool.MOVE, EditTool.DELETE, EditTool.ALIGN]
    tool = tools[int(rng.integers(0, len(tools)))]
    if tool is EditTool.MOVE:
        return EditOp(tool=tool, selection=selection, delta=float(rng.normal()))
    if tool is EditTool.ALIGN:
        anchor = [Anchor.LEFT, Anchor.RIGHT, Anchor.WEIGHTED_MEAN][int(rng.integers(0, 3))]
        if anchor is Anchor.WEIGHTED_MEAN and term.counts[list(selection.bin_indices)].sum() == 0:
            anchor = Anchor.LEFT
        return EditOp(tool=tool, selection=selection, anchor=anchor)
    if tool is EditTool.MONOTONIZE:
        direction = Direction.INCREASING if rng.random() < 0.5 else Direction.DECREASING
        return EditOp(tool=tool, selection=selection, direction=direction)
    if tool is EditTool.INTERPOLATE:
        mode = [InterpolateMode.LINEAR, InterpolateMode.EQUAL_BINS,
                InterpolateMode.REGRESSION][int(rng.integers(0, 3))]
        segments = int(rng.integers(1, selection.size + 1)) if mode is InterpolateMode.EQUAL_BINS else None
        return EditOp(tool=tool, selection=selection, mode=mode, segments=segments)
    return EditOp(tool=tool, selection=selection)
