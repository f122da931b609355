"""Local tests for intersection hypotheses: the pluggable core of the closed
testing machinery.

A local test decides, at level alpha, whether the joint null over an index
set I is rejected. Exchangeable tests depend only on the multiset of
statistics in I, which is what enables the polynomial shortcuts; the table
and regression tests are evaluated set by set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _lattice
from .errors import InputError
from .hypotheses import HypothesisSet, IndexSet
from .statfun import chi2_quantile, f_cdf, std_normal_quantile

_chi2_cache: dict[tuple[float, int], float] = {}


def _chi2_upper(alpha: float, df: int) -> float:
    key = (alpha, df)
    if key not in _chi2_cache:
        _chi2_cache[key] = chi2_quantile(1.0 - alpha, df)
    return _chi2_cache[key]


def fisher_thresholds(alpha: float, max_size: int) -> np.ndarray:
    """g_r for r = 1..max_size: upper-alpha chi-square points with 2r df."""
    return np.array([_chi2_upper(alpha, 2 * r) for r in range(1, max_size + 1)])


# ---------------------------------------------------------------------------
# critical value families for the ordered-p-value tests


def _harmonic(m: int) -> float:
    return sum(1.0 / v for v in range(1, m + 1))


@dataclass(frozen=True)
class CriticalValueFamily:
    """The triangular array c_i^m of per-rank critical values.

    variant "scaled" is the classic i*alpha/m rule, "harmonic" divides by the
    m-th harmonic number on top (valid under arbitrary dependence), and
    "constant" uses fixed per-rank thresholds k_i independent of m (the
    permutation-calibrated case).

    The two monotonicity flags gate the shortcuts: level_monotone means
    c_i^l <= c_i^m whenever l >= m; diagonal_monotone means
    c_i^m >= c_{i-w}^{m-w} for every 1 <= w < i.
    """

    variant: str
    constants: Optional[tuple[float, ...]] = None
    calibration_alpha: Optional[float] = None

    def __post_init__(self):
        if self.variant not in ("scaled", "harmonic", "constant"):
            raise InputError(f"unknown critical value variant {self.variant!r}")
        if self.variant == "constant":
            if not self.constants:
                raise InputError("constant family needs explicit thresholds")
            ks = self.constants
            if any(not 0.0 <= k <= 1.0 for k in ks):
                raise InputError("constant thresholds must lie in [0, 1]")
            if any(ks[i] > ks[i + 1] for i in range(len(ks) - 1)):
                raise InputError("constant thresholds must be nondecreasing")
        elif self.constants is not None:
            raise InputError("explicit thresholds only make sense for variant='constant'")

    @property
    def level_monotone(self) -> bool:
        return True  # all three variants shrink (or hold) as m grows

    @property
    def diagonal_monotone(self) -> bool:
        # i*alpha/m: i(m-w) >= (i-w)m iff i <= m. Harmonic scaling breaks it
        # (K_m grows with m); constant nondecreasing thresholds keep it.
        return self.variant in ("scaled", "constant")

    def crit(self, i: int, m: int, alpha: float) -> float:
        if not 1 <= i <= m:
            raise InputError(f"rank {i} out of range for set size {m}")
        if self.variant == "scaled":
            return i * alpha / m
        if self.variant == "harmonic":
            return i * alpha / (_harmonic(m) * m)
        if i > len(self.constants):
            raise InputError(f"rank {i} beyond calibrated thresholds ({len(self.constants)})")
        return self.constants[i - 1]

    def crit_row(self, m: int, alpha: float) -> np.ndarray:
        """c_i^m for i = 1..m as an array."""
        if self.variant == "scaled":
            return np.arange(1, m + 1) * (alpha / m)
        if self.variant == "harmonic":
            return np.arange(1, m + 1) * (alpha / (_harmonic(m) * m))
        if m > len(self.constants):
            raise InputError(f"set size {m} beyond calibrated thresholds")
        return np.asarray(self.constants[:m], dtype=float)

    def describe(self) -> str:
        if self.variant == "constant":
            return f"constant({len(self.constants)} thresholds)"
        return self.variant


def simes_family() -> CriticalValueFamily:
    return CriticalValueFamily("scaled")


def hommel_family() -> CriticalValueFamily:
    return CriticalValueFamily("harmonic")


def constant_family(thresholds: Sequence[float],
                    calibration_alpha: Optional[float] = None) -> CriticalValueFamily:
    return CriticalValueFamily("constant", tuple(float(k) for k in thresholds),
                               calibration_alpha)


# ---------------------------------------------------------------------------
# plain-function forms of the individual tests


def fisher_reject(pvals: Sequence[float], alpha: float) -> bool:
    """Combination test: reject when -2 * sum(log p) reaches the upper-alpha
    chi-square point with 2 * len(pvals) degrees of freedom."""
    pvals = list(pvals)
    if not pvals:
        raise InputError("need at least one p-value")
    if any(not 0.0 < p <= 1.0 for p in pvals):
        raise InputError("p-values must lie in (0, 1]")
    stat = -2.0 * sum(math.log(p) for p in pvals)
    return stat >= _chi2_upper(alpha, 2 * len(pvals))


def simes_style_reject(pvals: Sequence[float], family: CriticalValueFamily,
                       m_context: int, alpha: float) -> bool:
    """Reject when some ordered p-value p_(i) falls at or below c_i^m."""
    pvals = sorted(pvals)
    if len(pvals) != m_context:
        raise InputError(f"m_context {m_context} does not match {len(pvals)} p-values")
    row = family.crit_row(m_context, alpha)
    return any(p <= c for p, c in zip(pvals, row))


def normal_sum_reject(zvals: Sequence[float], alpha: float, dependence: str) -> bool:
    """Sum-of-scores test, one-sided against large z.

    Threshold sqrt(#I) * q for independent scores and #I * q in general,
    where q is the upper-alpha standard normal point. The general variant
    requires alpha <= 1/2 (q >= 0); at alpha = 1/2 the threshold is 0.
    """
    zvals = list(zvals)
    if not zvals:
        raise InputError("need at least one z-score")
    if dependence not in ("independent", "general"):
        raise InputError(f"dependence must be 'independent' or 'general', got {dependence!r}")
    if dependence == "general" and alpha > 0.5:
        raise InputError("the general-dependence test requires alpha <= 1/2")
    q = std_normal_quantile(1.0 - alpha)
    k = len(zvals)
    scale = math.sqrt(k) if dependence == "independent" else float(k)
    return sum(zvals) >= scale * q


def table_reject(explicit: Sequence[IndexSet], I: IndexSet) -> bool:
    return any(I.mask == e.mask and I.n == e.n for e in explicit)


# ---------------------------------------------------------------------------
# local test objects used by the closure engine and the shortcuts


class LocalTest:
    """Common surface for local tests.

    reject() is the pure per-set evaluation. Exchangeable tests additionally
    expose sig_values()/reject_values() working on a multiset of per-
    hypothesis statistics oriented so smaller means more significant, plus
    shortcut_monotone() saying whether the two monotonicity assumptions of
    the quadratic shortcut hold at a given level.
    """

    kind: str = "abstract"
    exchangeable: bool = False

    def reject(self, hyps: HypothesisSet, I: IndexSet, alpha: float) -> bool:
        raise NotImplementedError

    def batch_raw(self, hyps: HypothesisSet, alpha: float) -> Optional[np.ndarray]:
        """Raw rejection flags for all 2**n masks, or None if not vectorized."""
        return None

    def sig_values(self, hyps: HypothesisSet) -> np.ndarray:
        raise InputError(f"{self.kind} test is not exchangeable")

    def reject_values(self, values: Sequence[float], alpha: float) -> bool:
        raise InputError(f"{self.kind} test is not exchangeable")

    def shortcut_monotone(self, alpha: float, max_size: int) -> bool:
        return False

    def describe(self) -> str:
        return self.kind


class FisherTest(LocalTest):
    kind = "fisher"
    exchangeable = True

    def reject(self, hyps, I, alpha):
        pv = hyps.require_pvalues()
        return fisher_reject([pv[i] for i in I], alpha)

    def sig_values(self, hyps):
        return np.asarray(hyps.require_pvalues(), dtype=float)

    def reject_values(self, values, alpha):
        return fisher_reject(values, alpha)

    def shortcut_monotone(self, alpha, max_size):
        # Worst case for adding a p-value q <= min(P) to a borderline
        # rejection is all contributions equal, so the exact requirement is
        # (k+1)/k * g_k >= g_{k+1} for every k below max_size. Holds for
        # small alpha, fails near alpha = 1/2.
        g = fisher_thresholds(alpha, max_size)
        for k in range(1, max_size):
            if (k + 1) / k * g[k - 1] < g[k] - 1e-12:
                return False
        return True

    def batch_raw(self, hyps, alpha):
        pv = np.asarray(hyps.require_pvalues(), dtype=float)
        n = hyps.n
        stats = _lattice.subset_sum(-2.0 * np.log(pv))
        sizes = _lattice.popcounts(n)
        thresholds = np.concatenate([[np.inf], fisher_thresholds(alpha, n)])
        return stats >= thresholds[sizes]


class SimesFamilyTest(LocalTest):
    kind = "simes_family"
    exchangeable = True

    def __init__(self, family: CriticalValueFamily):
        self.family = family

    def reject(self, hyps, I, alpha):
        pv = hyps.require_pvalues()
        vals = [pv[i] for i in I]
        return simes_style_reject(vals, self.family, len(vals), alpha)

    def sig_values(self, hyps):
        return np.asarray(hyps.require_pvalues(), dtype=float)

    def reject_values(self, values, alpha):
        return simes_style_reject(values, self.family, len(values), alpha)

    def shortcut_monotone(self, alpha, max_size):
        # diagonal monotonicity with w = 1 gives c_{i+1}^{k+1} >= c_i^k, so a
        # rejection survives the extra smallest p-value; harmonic scaling
        # has a counterexample and is excluded.
        return self.family.level_monotone and self.family.diagonal_monotone

    def batch_raw(self, hyps, alpha):
        pv = np.asarray(hyps.require_pvalues(), dtype=float)
        n = hyps.n
        masks = np.arange(1 << n, dtype=np.uint64)
        sizes = _lattice.popcounts(n)
        out = np.zeros(1 << n, dtype=bool)
        order = np.argsort(pv, kind="stable")
        for k in range(1, n + 1):
            layer = np.nonzero(sizes == k)[0]
            if layer.size == 0:
                continue
            layer_masks = masks[layer]
            row = self.family.crit_row(k, alpha)
            hit = np.zeros(layer.size, dtype=bool)
            for i in range(1, k + 1):
                # p^I_(i) <= c iff at least i members of I have p <= c
                sel = 0
                c = row[i - 1]
                for j in order:
                    if pv[j] <= c:
                        sel |= 1 << int(j)
                    else:
                        break
                counts = _popcount_array(layer_masks & np.uint64(sel))
                hit |= counts >= i
            out[layer] = hit
        return out

    def describe(self):
        return f"{self.kind}({self.family.describe()})"


class NormalSumTest(LocalTest):
    exchangeable = True

    def __init__(self, dependence: str):
        if dependence not in ("independent", "general"):
            raise InputError(f"bad dependence {dependence!r}")
        self.dependence = dependence
        self.kind = f"normal_sum_{dependence}"

    def reject(self, hyps, I, alpha):
        zs = hyps.require_zscores()
        return normal_sum_reject([zs[i] for i in I], alpha, self.dependence)

    def sig_values(self, hyps):
        # Negated scores: smaller means more significant, matching p-values.
        return -np.asarray(hyps.require_zscores(), dtype=float)

    def reject_values(self, values, alpha):
        return normal_sum_reject([-v for v in values], alpha, self.dependence)

    def shortcut_monotone(self, alpha, max_size):
        # For alpha <= 1/2 the threshold grows by at most q per added score
        # while the added score is at least the running mean, which is
        # enough; for alpha > 1/2 the inequality flips.
        return alpha <= 0.5

    def batch_raw(self, hyps, alpha):
        zs = np.asarray(hyps.require_zscores(), dtype=float)
        n = hyps.n
        if self.dependence == "general" and alpha > 0.5:
            raise InputError("the general-dependence test requires alpha <= 1/2")
        stats = _lattice.subset_sum(zs)
        sizes = _lattice.popcounts(n).astype(float)
        q = std_normal_quantile(1.0 - alpha)
        scale = np.sqrt(sizes) if self.dependence == "independent" else sizes
        out = stats >= scale * q
        out[0] = False
        return out


class TableTest(LocalTest):
    """Rejections specified by an explicit list of index sets."""

    kind = "table"
    exchangeable = False

    def __init__(self, explicit: Sequence[IndexSet], n: int):
        for e in explicit:
            if e.n != n:
                raise InputError("explicit set with wrong ambient size")
            if e.mask == 0:
                raise InputError("the empty set cannot be rejected")
        self.n = n
        self.masks = frozenset(e.mask for e in explicit)

    def reject(self, hyps, I, alpha):
        return I.mask in self.masks

    def batch_raw(self, hyps, alpha):
        out = np.zeros(1 << self.n, dtype=bool)
        for m in self.masks:
            out[m] = True
        return out

    def is_upward_closed(self) -> bool:
        for m in self.masks:
            for b in range(self.n):
                bit = 1 << b
                if not m & bit and (m | bit) not in self.masks:
                    return False
        return True


class RegressionFTest(LocalTest):
    """Nested-model F-test: the null model drops the coefficients in I.

    The response is regressed on an always-included intercept plus the
    design columns; testing I means constraining those slopes to zero and
    comparing residual sums of squares against the saturated model.
    """

    kind = "regression_f"
    exchangeable = False

    def __init__(self, design, response, names: Optional[Sequence[str]] = None):
        X = np.asarray(design, dtype=float)
        y = np.asarray(response, dtype=float)
        if X.ndim != 2:
            raise InputError("design must be a 2-d matrix")
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise InputError("response length does not match design rows")
        N, k = X.shape
        if N <= k + 1:
            raise InputError(f"need more observations than parameters (N={N}, k={k})")
        A = np.column_stack([np.ones(N), X])
        if np.linalg.matrix_rank(A) < k + 1:
            raise InputError("design matrix is rank deficient")
        self.X = X
        self.y = y
        self.N = N
        self.k = k
        self.df_resid = N - k - 1
        self.rss_full = self._rss(A)
        if names is None:
            names = [f"x{j + 1}" for j in range(k)]
        if len(names) != k:
            raise InputError("names length does not match design columns")
        self.names = tuple(names)

    def _rss(self, A):
        _, res, rank, _ = np.linalg.lstsq(A, self.y, rcond=None)
        if res.size:
            return float(res[0])
        fitted = A @ np.linalg.lstsq(A, self.y, rcond=None)[0]
        return float(np.sum((self.y - fitted) ** 2))

    def f_statistic(self, I: IndexSet) -> float:
        drop = set(I.indices())
        if not drop:
            raise InputError("cannot test the empty coefficient set")
        if max(drop) >= self.k:
            raise InputError("coefficient index out of range")
        keep = [j for j in range(self.k) if j not in drop]
        A0 = np.column_stack([np.ones(self.N)] + [self.X[:, j] for j in keep])
        rss0 = self._rss(A0)
        if self.rss_full <= 1e-12 * max(1.0, float(np.sum(self.y**2))):
            # Degenerate saturated fit: no quantifiable evidence, keep F at 0.
            return 0.0
        num = max(rss0 - self.rss_full, 0.0) / len(drop)
        return num / (self.rss_full / self.df_resid)

    def pvalue(self, I: IndexSet) -> float:
        return 1.0 - f_cdf(self.f_statistic(I), len(I), self.df_resid)

    def reject(self, hyps, I, alpha):
        return self.pvalue(I) <= alpha

    def marginal_pvalues(self) -> list[float]:
        """Two-sided per-coefficient t-test p-values from the saturated model
        (F with 1 numerator df equals t squared)."""
        out = []
        for j in range(self.k):
            I = IndexSet.from_indices([j], self.k)
            out.append(self.pvalue(I))
        return out

    def hypotheses(self) -> HypothesisSet:
        from .hypotheses import make_hypotheses
        return make_hypotheses(self.names, pvalues=self.marginal_pvalues())


def ftest_reject(design, response, I: IndexSet, alpha: float) -> bool:
    return RegressionFTest(design, response).reject(None, I, alpha)


_KIND_ALIASES = {
    "fisher": "fisher",
    "simes": "simes",
    "hommel": "hommel",
    "normal-independent": "normal-independent",
    "normal_independent": "normal-independent",
    "normal-general": "normal-general",
    "normal_general": "normal-general",
    "constant": "constant",
}


def make_test(kind: str, thresholds: Optional[Sequence[float]] = None,
              calibration_alpha: Optional[float] = None) -> LocalTest:
    """Build a local test from a plain configuration (CLI flags, JSON)."""
    canonical = _KIND_ALIASES.get(kind)
    if canonical is None:
        raise InputError(f"unknown test kind {kind!r}")
    if canonical == "fisher":
        return FisherTest()
    if canonical == "simes":
        return SimesFamilyTest(simes_family())
    if canonical == "hommel":
        return SimesFamilyTest(hommel_family())
    if canonical == "normal-independent":
        return NormalSumTest("independent")
    if canonical == "normal-general":
        return NormalSumTest("general")
    if thresholds is None:
        raise InputError("constant test kind needs explicit thresholds")
    return SimesFamilyTest(constant_family(thresholds, calibration_alpha))


def _popcount_array(masks: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(masks)
    counts = np.zeros(masks.shape, dtype=np.uint8)
    m = masks.copy()
    while m.any():
        counts += (m & 1).astype(np.uint8)
        m >>= 1
    return counts
