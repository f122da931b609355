"""User-facing inference assembly: confidence reports, curves, estimates.

Every report carries a provenance tag so a shortcut bound is never presented
as an exact value, and point estimates are always produced next to the
confidence set they were derived from.
"""

from __future__ import annotations

from typing import Optional

from .closure import ClosureResult, run_closure, t_alpha
from .confidence import EXACT, UPPER_BOUND, ConfidenceSet
from .errors import NoApplicableMethod
from .hypotheses import FULL_CLOSURE_CAP, HypothesisSet, IndexSet
from .localtests import FisherTest, LocalTest, SimesFamilyTest
from .shortcuts import (FdpCurve, closure_curve, dispatch_bound, fisher_curve,
                        simes_curve)

ESTIMATE_LEVEL = 0.5


def bound_report(hyps: HypothesisSet, test: LocalTest, R: IndexSet, alpha: float,
                 prefer_exact: bool = True,
                 closure_cache: Optional[ClosureResult] = None) -> ConfidenceSet:
    """Simultaneous confidence statement for the rejected set R."""
    bound, provenance, method = dispatch_bound(hyps, test, R, alpha,
                                               prefer_exact=prefer_exact,
                                               closure_cache=closure_cache)
    return ConfidenceSet(R=R, alpha=alpha, t_upper=bound, provenance=provenance,
                         method=method, set_names=tuple(R.names(hyps)))


def estimate_tau(hyps: HypothesisSet, test: LocalTest, R: IndexSet,
                 prefer_exact: bool = True,
                 closure_cache: Optional[ClosureResult] = None) -> int:
    """Median-style point estimate: the same upper bound evaluated at level
    1/2. Overshoots the truth for some R with probability at most 1/2, so it
    must be read next to a real confidence set, never alone."""
    bound, _, _ = dispatch_bound(hyps, test, R, ESTIMATE_LEVEL,
                                 prefer_exact=prefer_exact,
                                 closure_cache=closure_cache)
    return bound


def estimate_report(hyps: HypothesisSet, test: LocalTest, R: IndexSet,
                    alpha: float, prefer_exact: bool = True,
                    closure_cache: Optional[ClosureResult] = None,
                    estimate_cache: Optional[ClosureResult] = None) -> dict:
    """Point estimate plus the confidence set at the analysis level."""
    interval = bound_report(hyps, test, R, alpha, prefer_exact=prefer_exact,
                            closure_cache=closure_cache)
    estimate = estimate_tau(hyps, test, R, prefer_exact=prefer_exact,
                            closure_cache=estimate_cache)
    return {
        "estimate_t_half": estimate,
        "estimate_f_half": len(R) - estimate,
        "interval": interval.as_dict(),
        "note": "median-style estimate; interpret only together with the interval",
    }


def curve_report(hyps: HypothesisSet, test: LocalTest, alpha: float,
                 prefer_exact: bool = True,
                 closure_cache: Optional[ClosureResult] = None) -> tuple[FdpCurve, str]:
    """Confidence curve for all top-r rejection sets, with provenance."""
    if hyps.n <= FULL_CLOSURE_CAP and prefer_exact:
        if closure_cache is not None:
            order = hyps.p_order()
            points = []
            for r in range(1, hyps.n + 1):
                R = IndexSet.from_indices(order[:r], hyps.n)
                points.append((r, r - t_alpha(closure_cache, R)))
            curve = FdpCurve(tuple(points), alpha,
                             f"closure[{test.describe()}]", tuple(order))
        else:
            curve = closure_curve(hyps, test, alpha)
        return curve, EXACT
    if isinstance(test, FisherTest) and test.shortcut_monotone(alpha, hyps.n + 1):
        return fisher_curve(hyps, alpha), UPPER_BOUND
    if isinstance(test, SimesFamilyTest) and test.family.level_monotone:
        return simes_curve(hyps, test.family, alpha), UPPER_BOUND
    raise NoApplicableMethod(
        f"no curve method for {test.describe()} with n={hyps.n}")


def curve_dict(curve: FdpCurve, provenance: str) -> dict:
    return {
        "alpha": curve.alpha,
        "method": curve.test_description,
        "provenance": provenance,
        "points": [{"r": r, "f_lower": f} for r, f in curve.points],
        "order": [i + 1 for i in curve.order],
    }
