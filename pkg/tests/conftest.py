"""Shared fixtures: reference datasets and a deliberately naive brute-force
oracle (plain dict-and-loop closed testing) that the real engines are
checked against."""

import math

import numpy as np
import pytest

from cherrypick import IndexSet, make_hypotheses
from cherrypick.localtests import TableTest
from cherrypick.statfun import chi2_quantile, std_normal_quantile

ADVERSE_EVENTS = [
    ("Anemia", 0.02),
    ("Myocardial-infarct", 0.03),
    ("Diarrhea", 0.04),
    ("Nausea-and-vomiting", 0.04),
    ("Stomatitis", 0.08),
    ("Skin-rash", 0.10),
    ("Dehydration", 0.12),
    ("Shortness-of-breath", 0.18),
    ("Renal-failure", 0.20),
    ("Fever", 0.23),
    ("Blurred-vision", 0.26),
    ("Nose-bleed", 0.28),
    ("Anorexia", 0.30),
    ("Bronchitis", 0.31),
    ("Wheezing", 0.40),
    ("Headache", 0.50),
]

GASTRO = ["Diarrhea", "Nausea-and-vomiting", "Stomatitis"]

FOUR_BORDERLINE = [0.051, 0.064, 0.097, 0.108]


@pytest.fixture(scope="session")
def adverse_hyps():
    names = [n for n, _ in ADVERSE_EVENTS]
    pvals = [p for _, p in ADVERSE_EVENTS]
    return make_hypotheses(names, pvalues=pvals)


@pytest.fixture(scope="session")
def adverse_csv():
    lines = ["name,p"] + [f"{n},{p}" for n, p in ADVERSE_EVENTS]
    return "\n".join(lines) + "\n"


@pytest.fixture(scope="session")
def borderline_hyps():
    return make_hypotheses([f"H{i}" for i in range(1, 5)], pvalues=FOUR_BORDERLINE)


def three_way_table_test():
    """The worked three-hypothesis example: crosses on {1}, {1,2}, {1,3},
    {2,3} and {1,2,3} (1-based), which is upward closed."""
    crosses = [
        IndexSet.from_indices([0], 3),
        IndexSet.from_indices([0, 1], 3),
        IndexSet.from_indices([0, 2], 3),
        IndexSet.from_indices([1, 2], 3),
        IndexSet.from_indices([0, 1, 2], 3),
    ]
    return TableTest(crosses, 3)


@pytest.fixture(scope="session")
def figure_table_test():
    return three_way_table_test()


@pytest.fixture(scope="session")
def figure_hyps():
    # p-values are irrelevant to a table test but the data model wants them
    return make_hypotheses(["H1", "H2", "H3"], pvalues=[0.5, 0.5, 0.5])


# ---------------------------------------------------------------------------
# brute-force oracle, kept intentionally dumb and engine-independent


def oracle_fisher_delta(alpha):
    def delta(pvals):
        stat = -2.0 * sum(math.log(p) for p in pvals)
        return stat >= chi2_quantile(1.0 - alpha, 2 * len(pvals))
    return delta


def oracle_simes_delta(alpha):
    def delta(pvals):
        ps = sorted(pvals)
        k = len(ps)
        return any(ps[i] <= (i + 1) * alpha / k for i in range(k))
    return delta


def oracle_hommel_delta(alpha):
    def delta(pvals):
        ps = sorted(pvals)
        k = len(ps)
        km = sum(1.0 / v for v in range(1, k + 1))
        return any(ps[i] <= (i + 1) * alpha / (km * k) for i in range(k))
    return delta


def oracle_constant_delta(thresholds):
    def delta(pvals):
        ps = sorted(pvals)
        return any(p <= t for p, t in zip(ps, thresholds))
    return delta


def oracle_normal_delta(alpha, dependence):
    q = std_normal_quantile(1.0 - alpha)
    def delta(zvals):
        k = len(zvals)
        scale = math.sqrt(k) if dependence == "independent" else k
        return sum(zvals) >= scale * q
    return delta


def oracle_closure(values, delta):
    """All closed-testing rejections as a set of masks, by definition:
    m is rejected iff delta holds on every superset of m."""
    n = len(values)
    raw = {}
    for m in range(1, 1 << n):
        raw[m] = delta([values[i] for i in range(n) if m >> i & 1])
    rejected = set()
    full = (1 << n) - 1
    for m in range(1, 1 << n):
        rest = full & ~m
        ok = raw[m]
        extra = rest
        while ok and extra > 0:
            if not raw[m | extra]:
                ok = False
            extra = (extra - 1) & rest
        if ok:
            rejected.add(m)
    return rejected


def oracle_t_alpha(rejected_masks, r_mask):
    best = 0
    sub = r_mask
    while sub > 0:
        if sub not in rejected_masks:
            best = max(best, bin(sub).count("1"))
        sub = (sub - 1) & r_mask
    return best


def random_pvalues(rng, n):
    """Uniform / strong-signal beta mixture used across the suites."""
    signal = rng.random(n) < 0.4
    pv = np.where(signal, rng.beta(0.25, 1.0, n), rng.random(n))
    return np.clip(pv, 1e-12, 1.0)
