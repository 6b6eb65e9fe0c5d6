import math

import numpy as np
import pytest

from gamedit import (
    Dataset,
    FeatureTerm,
    GamModel,
    LinkFunction,
    Selection,
    TermKind,
    affected_samples,
    frequency_vector,
    ranking,
)
from gamedit.correlation import FrequencyVector, l2_distance

from helpers import random_dataset, random_model


def term_of(name, edges):
    edges = np.asarray(edges, dtype=float)
    return FeatureTerm(name=name, kind=TermKind.CONTINUOUS,
                       scores=np.zeros(len(edges)), counts=np.ones(len(edges), dtype=int),
                       bin_edges=edges)


class TestFrequencyVector:
    def test_uniform_split(self):
        term = term_of("t", [0, 10])
        fv = frequency_vector(term, np.array([1.0, 2.0, 11.0, 12.0]))
        assert fv.frequencies.tolist() == [0.5, 0.5]

    def test_point_mass(self):
        term = term_of("t", [0, 10])
        fv = frequency_vector(term, np.array([1.0, 2.0, 3.0, 4.0]))
        assert fv.frequencies.tolist() == [1.0, 0.0]

    def test_hand_count(self):
        term = FeatureTerm(name="t", kind=TermKind.CATEGORICAL,
                           scores=np.zeros(3), counts=np.ones(3, dtype=int),
                           bin_labels=("a", "b", "c"))
        fv = frequency_vector(term, np.array(["a", "a", "b"], dtype=object))
        assert fv.frequencies.tolist() == pytest.approx([2 / 3, 1 / 3, 0.0])

    def test_sums_to_one(self):
        rng = np.random.default_rng(9)
        model = random_model(rng, n_terms=1, max_bins=7)
        data = random_dataset(rng, model, n=37)
        fv = frequency_vector(model.terms[0], data.columns[model.terms[0].name])
        assert abs(fv.frequencies.sum() - 1.0) <= 1e-12

    def test_empty_flagged(self):
        term = term_of("t", [0, 10])
        fv = frequency_vector(term, np.array([]))
        assert fv.is_empty
        assert fv.frequencies.tolist() == [0.0, 0.0]


class TestDistance:
    def test_hand_l2(self):
        full = FrequencyVector("t", np.array([0.5, 0.5]))
        sel = FrequencyVector("t", np.array([1.0, 0.0]))
        assert l2_distance(full, sel) == pytest.approx(math.sqrt(0.5), abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            a = rng.dirichlet(np.ones(5))
            b = rng.dirichlet(np.ones(5))
            u = FrequencyVector("t", a)
            v = FrequencyVector("t", b)
            assert l2_distance(u, v) == l2_distance(v, u)

    def test_bounds(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            n = int(rng.integers(1, 9))
            u = FrequencyVector("t", rng.dirichlet(np.ones(n)))
            v = FrequencyVector("t", rng.dirichlet(np.ones(n)))
            d = l2_distance(u, v)
            assert 0.0 <= d <= math.sqrt(2) + 1e-12


class TestAffectedSamples:
    def test_full_selection_covers_everything(self, clinic_model, clinic_dataset):
        sel = Selection("Age", tuple(range(clinic_model.term("Age").n_bins)))
        assert len(affected_samples(clinic_dataset, sel, clinic_model)) == len(clinic_dataset)

    def test_empty_intersection(self, clinic_model):
        ds = Dataset(columns={"Age": np.array([20.0, 30.0]),
                              "Asthma": np.array(["false", "false"], dtype=object),
                              "Gender": np.array(["male", "female"], dtype=object)},
                     labels=np.zeros(2), term_order=("Age", "Asthma", "Gender"))
        sel = Selection("Age", (80,))
        assert len(affected_samples(ds, sel, clinic_model)) == 0

    def test_age_band_fixture_has_28_matches(self, clinic_model):
        # 28 samples inside ages [86, 106], the rest outside
        rng = np.random.default_rng(1)
        inside = rng.uniform(86, 106, size=28)
        outside = rng.uniform(18, 85.9, size=72)
        ages = np.concatenate([inside, outside])
        n = len(ages)
        ds = Dataset(columns={"Age": ages,
                              "Asthma": np.array(["false"] * n, dtype=object),
                              "Gender": np.array(["female"] * n, dtype=object)},
                     labels=np.zeros(n), term_order=("Age", "Asthma", "Gender"))
        age = clinic_model.term("Age")
        first = int(np.searchsorted(age.bin_edges, 86, side="right")) - 1
        sel = Selection("Age", tuple(range(first, age.n_bins)))
        assert len(affected_samples(ds, sel, clinic_model)) == 28


class TestRanking:
    def test_identical_distribution_scores_zero(self):
        # x2 cycles independently of x1's halves, so selection on x1 leaves
        # x2's distribution untouched
        x1 = np.array([0.0, 0.0, 10.0, 10.0] * 10)
        x2 = np.array([0.0, 10.0] * 20)
        model = GamModel(intercept=0.0, link=LinkFunction.IDENTITY,
                         terms=(term_of("x1", [0, 10]), term_of("x2", [0, 10])))
        ds = Dataset(columns={"x1": x1, "x2": x2}, labels=np.zeros(40),
                     term_order=("x1", "x2"))
        entries = ranking(model, ds, Selection("x1", (0,)))
        assert entries[0].distance <= 1e-12

    def test_perfectly_correlated_companion_ranks_first(self):
        rng = np.random.default_rng(14)
        x1 = rng.uniform(0, 20, size=200)
        x2 = x1.copy()
        x3 = rng.uniform(0, 20, size=200)
        terms = (term_of("x1", [0, 5, 10, 15]), term_of("x2", [0, 5, 10, 15]),
                 term_of("x3", [0, 5, 10, 15]))
        model = GamModel(intercept=0.0, link=LinkFunction.IDENTITY, terms=terms)
        ds = Dataset(columns={"x1": x1, "x2": x2, "x3": x3},
                     labels=np.zeros(200), term_order=("x1", "x2", "x3"))
        entries = ranking(model, ds, Selection("x1", (0,)))
        assert entries[0].term_name == "x2"
        assert entries[0].distance > entries[1].distance

    def test_excludes_own_term_and_sorts_descending(self, clinic_model, clinic_dataset):
        entries = ranking(clinic_model, clinic_dataset, Selection("Age", (0, 1, 2)))
        names = [e.term_name for e in entries]
        assert "Age" not in names
        distances = [e.distance for e in entries]
        assert distances == sorted(distances, reverse=True)

    def test_deterministic_ties_break_by_name(self):
        x = np.array([1.0] * 8)
        model = GamModel(intercept=0.0, link=LinkFunction.IDENTITY,
                         terms=(term_of("sel", [0, 10]), term_of("b", [0]),
                                term_of("a", [0])))
        ds = Dataset(columns={"sel": x, "b": x, "a": x}, labels=np.zeros(8),
                     term_order=("sel", "b", "a"))
        entries = ranking(model, ds, Selection("sel", (0,)))
        # single-bin terms always have distance 0; ties break lexicographically
        assert [e.term_name for e in entries] == ["a", "b"]

    def test_identical_runs_identical_rankings(self, clinic_model, clinic_dataset):
        sel = Selection("Age", tuple(range(30, 50)))
        first = ranking(clinic_model, clinic_dataset, sel)
        second = ranking(clinic_model, clinic_dataset, sel)
        assert [(e.term_name, e.distance) for e in first] == \
               [(e.term_name, e.distance) for e in second]

    def test_empty_selection_ranked_last(self, clinic_model):
        # no samples at all in the selected region
        ds = Dataset(columns={"Age": np.array([20.0, 25.0]),
                              "Asthma": np.array(["false", "true"], dtype=object),
                              "Gender": np.array(["male", "female"], dtype=object)},
                     labels=np.zeros(2), term_order=("Age", "Asthma", "Gender"))
        entries = ranking(clinic_model, ds, Selection("Age", (88,)))
        assert all(e.distance == 0.0 for e in entries)
        assert all(e.selected.is_empty for e in entries)

    def test_independence_null_statistics(self):
        # independent features: mean distance over random selections stays
        # within the sampling-noise bound 3/sqrt(n_selected)
        rng = np.random.default_rng(15)
        n = 4000
        x1 = rng.uniform(0, 40, size=n)
        x2 = rng.uniform(0, 40, size=n)
        edges = [0, 10, 20, 30]
        model = GamModel(intercept=0.0, link=LinkFunction.IDENTITY,
                         terms=(term_of("x1", edges), term_of("x2", edges)))
        ds = Dataset(columns={"x1": x1, "x2": x2}, labels=np.zeros(n),
                     term_order=("x1", "x2"))
        for bins in [(0,), (1, 2), (0, 1, 2, 3)]:
            sel = Selection("x1", bins)
            entries = ranking(model, ds, sel)
            n_selected = len(affected_samples(ds, sel, model))
            assert entries[0].distance <= 3.0 / math.sqrt(n_selected)
