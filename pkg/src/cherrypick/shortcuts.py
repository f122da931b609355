"""Polynomial-time bounds on t_alpha(R) for problems too large to close.

Two engines: a quadratic scheme valid for any exchangeable, monotone local
test (at most n^2 evaluations), and test-specific refinements built on
prefix sums of the combination statistics. Every result is a sound upper
bound on t_alpha(R); for tests satisfying both monotonicity assumptions it
coincides with the exact value, which the test suite checks against the
brute-force engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .closure import run_closure, t_alpha
from .confidence import EXACT, UPPER_BOUND
from .errors import InputError, NoApplicableMethod
from .hypotheses import FULL_CLOSURE_CAP, HypothesisSet, IndexSet
from .localtests import (CriticalValueFamily, FisherTest, LocalTest,
                         SimesFamilyTest, fisher_thresholds)


@dataclass(frozen=True)
class FdpCurve:
    """Lower confidence bounds on correct rejections for top-r sets.

    points[r - 1] = (r, f_lower for the set of the r smallest p-values).
    f_lower is nondecreasing in r and never exceeds r.
    """

    points: tuple[tuple[int, int], ...]
    alpha: float
    test_description: str
    order: tuple[int, ...]  # hypothesis indices by ascending p-value

    def __post_init__(self):
        prev = 0
        for r, f in self.points:
            if not 0 <= f <= r:
                raise ValueError(f"f_lower {f} out of range at r={r}")
            if f < prev:
                raise ValueError("f_lower must be nondecreasing in r")
            prev = f

    def f_lower(self, r: int) -> int:
        if not 1 <= r <= len(self.points):
            raise InputError(f"r={r} outside the curve (1..{len(self.points)})")
        return self.points[r - 1][1]

    def top_set(self, r: int, n: int) -> IndexSet:
        return IndexSet.from_indices(self.order[:r], n)


@dataclass
class FisherScratch:
    """Sorted -2 log p contributions split by membership in R, with prefix
    sums so any u(R, k) / u(complement, j) is an O(1) lookup."""

    inside_prefix: np.ndarray   # ascending partial sums of w inside R
    outside_prefix: np.ndarray  # ascending partial sums of w outside R
    inside_sorted_w: np.ndarray
    outside_sorted_w: np.ndarray


def _split_values(values: np.ndarray, R: IndexSet):
    mask = np.zeros(len(values), dtype=bool)
    for i in R:
        mask[i] = True
    return values[mask], values[~mask]


def exchangeable_bound(hyps: HypothesisSet, test: LocalTest, R: IndexSet,
                       alpha: float) -> int:
    """Quadratic-cost bound on t_alpha(R) for exchangeable monotone tests.

    For each candidate s, rejection is demanded for the set of the s+1 least
    significant statistics inside R joined with every prefix of the least
    significant statistics outside R (ties included conservatively). The
    first s that passes bounds t_alpha(R); #R is returned when none does.
    """
    if not test.exchangeable:
        raise InputError(f"{test.kind} is not exchangeable")
    if not test.shortcut_monotone(alpha, hyps.n + 1):
        raise InputError(
            f"{test.describe()} does not satisfy the shortcut monotonicity "
            f"assumptions at alpha={alpha}")
    if R.mask == 0:
        raise InputError("R must be nonempty")
    values = test.sig_values(hyps)
    inside, outside = _split_values(values, R)
    inside = np.sort(inside)          # ascending significance values
    outside = np.sort(outside)[::-1]  # least significant first
    r = len(inside)
    for s in range(r):
        q_block = inside[r - (s + 1):]            # s+1 largest values in R
        m_r = int(np.sum(outside >= q_block[0]))  # ties kept in range
        ok = True
        for j in range(m_r + 1):
            if not test.reject_values(np.concatenate([q_block, outside[:j]]), alpha):
                ok = False
                break
        if ok:
            return s
    return r


def fisher_scratch(hyps: HypothesisSet, R: IndexSet) -> FisherScratch:
    pv = np.asarray(hyps.require_pvalues(), dtype=float)
    w = -2.0 * np.log(pv)
    w_in, w_out = _split_values(w, R)
    w_in = np.sort(w_in)    # ascending w = descending p
    w_out = np.sort(w_out)
    return FisherScratch(
        inside_prefix=np.concatenate([[0.0], np.cumsum(w_in)]),
        outside_prefix=np.concatenate([[0.0], np.cumsum(w_out)]),
        inside_sorted_w=w_in,
        outside_sorted_w=w_out,
    )


def fisher_bound(hyps: HypothesisSet, R: IndexSet, alpha: float) -> int:
    """Prefix-sum form of the combination-test bound on t_alpha(R).

    u(I, k) is the sum of the k smallest -2 log p inside I; t_alpha(R) <= s
    once u(R, s+1) >= g_{s+j+1} - u(complement, j) for every admissible j.
    Sound only where the monotone-growth property of the chi-square points
    holds, which is checked up front.
    """
    if R.mask == 0:
        raise InputError("R must be nonempty")
    test = FisherTest()
    if not test.shortcut_monotone(alpha, hyps.n + 1):
        raise InputError(f"fisher shortcut unavailable at alpha={alpha}: the "
                         "chi-square increments violate the monotonicity assumption")
    scratch = fisher_scratch(hyps, R)
    r = len(scratch.inside_sorted_w)
    g = fisher_thresholds(alpha, hyps.n)
    w_in = scratch.inside_sorted_w
    w_out = scratch.outside_sorted_w
    u_in = scratch.inside_prefix
    u_out = scratch.outside_prefix
    for s in range(r):
        # The (s+1)-block holds the s+1 smallest w inside R; its largest
        # member w_in[s] is the most significant one. Outside hypotheses no
        # more significant than that (w <= w_in[s], ties included) index the
        # prefixes that must stay rejected.
        m_r = int(np.sum(w_out <= w_in[s])) if len(w_out) else 0
        lhs = u_in[s + 1]
        js = np.arange(m_r + 1)
        rhs = g[s + js] - u_out[js]
        if lhs >= rhs.max():
            return s
    return r


def simes_curve(hyps: HypothesisSet, family: CriticalValueFamily,
                alpha: float) -> FdpCurve:
    """Confidence curve for threshold rejection sets under ordered-p tests.

    For each r, S_r counts how many stricter critical values the r-th
    ordered p-value still clears; the number of false hypotheses among any
    top-r set then exceeds the running maximum of the S values. Uses the
    sharper diagonal variant when the family supports it.
    """
    if not family.level_monotone:
        raise InputError("curve shortcut needs level-monotone critical values")
    pv = np.asarray(hyps.require_pvalues(), dtype=float)
    n = hyps.n
    order = hyps.p_order()
    ps = pv[order]
    diagonal = family.diagonal_monotone
    best = 0
    points = []
    for r in range(1, n + 1):
        s_r = -1
        for s in range(0, r):
            c = (family.crit(r - s, n - s, alpha) if diagonal
                 else family.crit(r - s, n, alpha))
            if ps[r - 1] <= c:
                s_r = s
            else:
                break
        best = max(best, s_r + 1)
        points.append((r, min(best, r)))
    return FdpCurve(tuple(points), alpha, f"simes_family({family.describe()})",
                    tuple(order))


def closure_curve(hyps: HypothesisSet, test: LocalTest, alpha: float) -> FdpCurve:
    """Exact curve from a full closure run (small n only)."""
    result = run_closure(hyps, test, alpha)
    order = hyps.p_order()
    points = []
    for r in range(1, hyps.n + 1):
        R = IndexSet.from_indices(order[:r], hyps.n)
        points.append((r, r - t_alpha(result, R)))
    return FdpCurve(tuple(points), alpha, f"closure[{test.describe()}]", tuple(order))


def fisher_curve(hyps: HypothesisSet, alpha: float) -> FdpCurve:
    """Fisher-shortcut curve over all top-r sets."""
    order = hyps.p_order()
    n = hyps.n
    points = []
    for r in range(1, n + 1):
        R = IndexSet.from_indices(order[:r], n)
        points.append((r, r - fisher_bound(hyps, R, alpha)))
    return FdpCurve(tuple(points), alpha, "fisher-shortcut", tuple(order))


def kfwer_frontier(curve: FdpCurve, max_k: Optional[int] = None) -> list[tuple[int, int]]:
    """Largest admissible top-r rejection count for each k.

    Entry (k, r) says: rejecting the r smallest p-values keeps the number of
    false rejections below k with the curve's confidence; r = 0 means not
    even one rejection is covered at that k. Stops once all n rejections are
    allowed unless max_k asks for more.
    """
    n = len(curve.points)
    t_vals = [r - f for r, f in curve.points]
    out = []
    k = 1
    while True:
        allowed = 0
        for r in range(1, n + 1):
            if t_vals[r - 1] < k:
                allowed = r
        out.append((k, allowed))
        if max_k is not None:
            if k >= max_k:
                break
        elif allowed >= n:
            break
        k += 1
    return out


def dispatch_bound(hyps: HypothesisSet, test: LocalTest, R: IndexSet,
                   alpha: float, prefer_exact: bool = True,
                   closure_cache=None) -> tuple[int, str, str]:
    """Route a bound query to the best available engine.

    Returns (bound, provenance, method). Exact closure is used whenever the
    problem is small enough and exactness is wanted; otherwise the
    test-specific or generic exchangeable shortcut, whose results are sound
    upper bounds on t_alpha(R) in every case.
    """
    if R.mask == 0:
        raise InputError("R must be nonempty")
    if hyps.n <= FULL_CLOSURE_CAP and prefer_exact:
        result = closure_cache if closure_cache is not None else run_closure(hyps, test, alpha)
        return t_alpha(result, R), EXACT, f"closure[{test.describe()}]"
    if isinstance(test, FisherTest) and test.shortcut_monotone(alpha, hyps.n + 1):
        return fisher_bound(hyps, R, alpha), UPPER_BOUND, "fisher-shortcut"
    if test.exchangeable and test.shortcut_monotone(alpha, hyps.n + 1):
        return exchangeable_bound(hyps, test, R, alpha), UPPER_BOUND, "exchangeable-shortcut"
    raise NoApplicableMethod(
        f"no method for {test.describe()} with n={hyps.n} at alpha={alpha}: "
        f"exact closure is capped at n={FULL_CLOSURE_CAP} and the test does "
        "not admit the shortcut")
