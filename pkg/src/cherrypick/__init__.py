"""Confidence bounds on false rejections for freely chosen rejection sets.

Reject any collection of hypotheses; the machinery returns simultaneous
(1 - alpha) confidence sets for how many of those rejections are false,
computed exactly by closed testing for small problems and by sound
polynomial shortcuts for large ones.
"""

from .bounds import bound_report, curve_report, estimate_report, estimate_tau
from .closure import (ClosureResult, confidence_sets, defining_rejections,
                      run_closure, t_alpha)
from .confidence import ConfidenceSet
from .errors import (CapExceeded, CherrypickError, ConvergenceError,
                     InputError, NoApplicableMethod, ParseError)
from .hypotheses import (FULL_CLOSURE_CAP, HypothesisSet, IndexSet,
                         make_hypotheses, parse_hypotheses, subsets_of_size)
from .localtests import (CriticalValueFamily, FisherTest, NormalSumTest,
                         RegressionFTest, SimesFamilyTest, TableTest,
                         constant_family, hommel_family, make_test,
                         simes_family)
from .permutation import PermutationPValues, calibrate_critvals
from .selection import parse_set_spec
from .shortcuts import (FdpCurve, dispatch_bound, exchangeable_bound,
                        fisher_bound, kfwer_frontier, simes_curve)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "CherrypickError", "ClosureResult", "ConfidenceSet",
    "ConvergenceError", "CriticalValueFamily", "FULL_CLOSURE_CAP", "FdpCurve",
    "FisherTest", "HypothesisSet", "IndexSet", "InputError",
    "NoApplicableMethod", "NormalSumTest", "ParseError", "PermutationPValues",
    "RegressionFTest", "SimesFamilyTest", "TableTest", "bound_report",
    "calibrate_critvals", "confidence_sets", "constant_family", "curve_report",
    "defining_rejections", "dispatch_bound", "estimate_report", "estimate_tau",
    "exchangeable_bound", "fisher_bound", "hommel_family", "kfwer_frontier",
    "make_hypotheses", "make_test", "parse_hypotheses", "parse_set_spec",
    "run_closure", "simes_curve", "simes_family", "subsets_of_size", "t_alpha",
]
