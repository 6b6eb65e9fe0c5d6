import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gamedit import Dataset, FeatureTerm, GamModel, InteractionTerm, LinkFunction, TermKind


@pytest.fixture
def age_term():
    # Ages 18..106 in 1-year bins, with a risk jump at 87 and a plunge past 100.
    edges = np.arange(18, 107, dtype=float)
    scores = np.interp(edges, [18, 80, 90, 99], [-0.4, 0.25, 0.5, 0.5])
    scores[edges >= 87] += 0.22          # abrupt rise from 86 to 87
    old = edges >= 100                   # plunge for the oldest patients
    scores[old] = -0.35 - 0.01 * (edges[old] - 100)
    counts = np.maximum(1, (400 - 4 * (edges - 18)).astype(int))
    return FeatureTerm(name="Age", kind=TermKind.CONTINUOUS, scores=scores,
                       counts=counts, bin_edges=edges)


@pytest.fixture
def asthma_term():
    return FeatureTerm(name="Asthma", kind=TermKind.CATEGORICAL,
                       scores=np.array([0.05, -0.3]),
                       counts=np.array([4200, 800]),
                       bin_labels=("false", "true"))


@pytest.fixture
def gender_term():
    return FeatureTerm(name="Gender", kind=TermKind.CATEGORICAL,
                       scores=np.array([-0.02, 0.03]),
                       counts=np.array([2600, 2400]),
                       bin_labels=("female", "male"))


@pytest.fixture
def clinic_model(age_term, asthma_term, gender_term):
    """Binary-risk fixture model shaped like a small clinical GAM."""
    return GamModel(intercept=-1.2, link=LinkFunction.LOGIT,
                    terms=(age_term, asthma_term, gender_term))


@pytest.fixture
def clinic_dataset(clinic_model):
    rng = np.random.default_rng(7)
    n = 600
    ages = rng.uniform(18, 106, size=n)
    asthma = np.where(rng.random(n) < 0.15, "true", "false").astype(object)
    gender = np.where(rng.random(n) < 0.52, "female", "male").astype(object)
    logits = -1.2 + np.interp(ages, [18, 80, 106], [-0.4, 0.3, 0.5])
    probs = 1.0 / (1.0 + np.exp(-logits))
    labels = (rng.random(n) < probs).astype(float)
    return Dataset(columns={"Age": ages, "Asthma": asthma, "Gender": gender},
                   labels=labels, term_order=("Age", "Asthma", "Gender"))


@pytest.fixture
def tiny_model():
    temp = FeatureTerm(name="temp", kind=TermKind.CONTINUOUS,
                       scores=np.array([0.2, -0.1, 0.4]),
                       counts=np.array([3, 5, 2]),
                       bin_edges=np.array([0.0, 10.0, 20.0]))
    color = FeatureTerm(name="color", kind=TermKind.CATEGORICAL,
                        scores=np.array([-0.2, 0.1]),
                        counts=np.array([6, 4]),
                        bin_labels=("red", "blue"))
    return GamModel(intercept=0.3, link=LinkFunction.LOGIT, terms=(temp, color))


@pytest.fixture
def interaction_model():
    a = FeatureTerm(name="a", kind=TermKind.CONTINUOUS,
                    scores=np.array([0.1, -0.2]), counts=np.array([2, 2]),
                    bin_edges=np.array([0.0, 1.0]))
    b = FeatureTerm(name="b", kind=TermKind.CATEGORICAL,
                    scores=np.array([0.3, -0.1]), counts=np.array([1, 3]),
                    bin_labels=("x", "y"))
    pair = InteractionTerm(feature_a="a", feature_b="b",
                           scores=np.array([[0.05, -0.05], [0.2, 0.0]]))
    return GamModel(intercept=-0.1, link=LinkFunction.LOGIT, terms=(a, b),
                    interactions=(pair,))
