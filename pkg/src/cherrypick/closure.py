"""The exact closed testing procedure over the full subset lattice.

This is the ground truth the shortcuts are checked against: evaluate the
local test on intersection hypotheses, keep every set whose supersets are all
raw-rejected, then read off t_alpha(R) as the size of the largest non-
rejected subset of R. Exponential in n, hence the hard cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _lattice, _parallel
from .confidence import EXACT, ConfidenceSet
from .errors import CapExceeded, InputError
from .hypotheses import FULL_CLOSURE_CAP, HypothesisSet, IndexSet, subsets_of_size
from .localtests import LocalTest, TableTest


@dataclass(frozen=True)
class ClosureStats:
    evaluated: int
    pruned: int
    engine: str


@dataclass(frozen=True)
class ClosureResult:
    """Rejection lattice at level alpha: rejected[m] says the intersection
    hypothesis of mask m is rejected by the closed testing procedure."""

    n: int
    alpha: float
    rejected: np.ndarray
    stats: ClosureStats
    test_description: str
    raw_rejected: Optional[np.ndarray] = None

    def is_rejected(self, I: IndexSet) -> bool:
        self._check(I)
        if I.mask == 0:
            raise InputError("the empty set is not an intersection hypothesis")
        return bool(self.rejected[I.mask])

    def rejected_count(self) -> int:
        return int(np.count_nonzero(self.rejected))

    def elementary_rejections(self) -> list[int]:
        return [i for i in range(self.n) if self.rejected[1 << i]]

    def _check(self, I: IndexSet):
        if I.n != self.n:
            raise InputError(f"index set over {I.n} elements, closure over {self.n}")


def run_closure(hyps: HypothesisSet, test: LocalTest, alpha: float,
                engine: str = "auto", prune: bool = True,
                keep_raw: bool = False) -> ClosureResult:
    """Evaluate the closed testing procedure exactly.

    engine "vector" computes all raw rejections in bulk (available for the
    exchangeable tests and tables) and closes them with a lattice sweep;
    "generic" walks cardinality layers top-down, skipping the local test for
    any set that already lost a superset. keep_raw forces full evaluation so
    the raw rejection lattice can be reported.
    """
    n = hyps.n
    if not 0.0 < alpha < 1.0:
        raise InputError(f"alpha must be in (0, 1), got {alpha}")
    if n > FULL_CLOSURE_CAP:
        raise CapExceeded(
            f"exact closure needs 2^{n} local tests; cap is n <= {FULL_CLOSURE_CAP}. "
            "Use the shortcut interface for larger problems.")
    if isinstance(test, TableTest) and not test.is_upward_closed():
        raise InputError("table test is not upward closed; closed testing over it "
                         "would silently drop listed rejections")
    raw = None
    if engine in ("auto", "vector"):
        raw = test.batch_raw(hyps, alpha)
        if raw is None and engine == "vector":
            raise InputError(f"{test.kind} has no vectorized evaluation; use engine='generic'")
        engine = "vector" if raw is not None else "generic"
    if engine == "vector":
        raw[0] = False
        rejected = _lattice.superset_and(raw.copy())
        stats = ClosureStats(evaluated=(1 << n) - 1, pruned=0,
                             engine=f"vector[{_lattice.backend_name()}]")
        return ClosureResult(n, alpha, rejected, stats, test.describe(),
                             raw if keep_raw else None)
    if engine != "generic":
        raise InputError(f"unknown engine {engine!r}")
    return _run_generic(hyps, test, alpha, prune and not keep_raw, keep_raw)


def _run_generic(hyps, test, alpha, prune, keep_raw):
    n = hyps.n
    size = 1 << n
    sizes = _lattice.popcounts(n)
    rejected = np.zeros(size, dtype=bool)
    raw = np.zeros(size, dtype=bool) if keep_raw else None
    evaluated = 0
    pruned = 0

    def evaluate(mask):
        return test.reject(hyps, IndexSet(int(mask), n), alpha)

    for k in range(n, 0, -1):
        layer = np.nonzero(sizes == k)[0]
        if prune and k < n:
            survivors = []
            for m in layer:
                m = int(m)
                ok = True
                rest = ~m & (size - 1)
                while rest:
                    low = rest & -rest
                    if not rejected[m | low]:
                        ok = False
                        break
                    rest ^= low
                if ok:
                    survivors.append(m)
                else:
                    pruned += 1
        else:
            survivors = [int(m) for m in layer]
        flags = _parallel.map_chunked(evaluate, survivors)
        evaluated += len(survivors)
        for m, flag in zip(survivors, flags):
            if keep_raw:
                raw[m] = flag
            rejected[m] = flag
    if not prune:
        # Flags above are raw rejections; close them downward in one sweep.
        _lattice.superset_and(rejected)
        rejected[0] = False
    engine = "generic-pruned" if prune else "generic-full"
    return ClosureResult(n, alpha, rejected,
                         ClosureStats(evaluated, pruned, engine),
                         test.describe(), raw)


def t_alpha(closure: ClosureResult, R: IndexSet) -> int:
    """Size of the largest subset of R not rejected by closed testing.

    Scans subset sizes from #R downward and stops at the first hit; the
    whole-lattice vectorized max is used when R is too large for pleasant
    enumeration.
    """
    closure._check(R)
    if R.mask == 0:
        raise InputError("R must be nonempty")
    r = len(R)
    rejected = closure.rejected
    if 1 << r <= 4096:
        for k in range(r, 0, -1):
            for sub in subsets_of_size(R, k):
                if not rejected[sub.mask]:
                    return k
        return 0
    masks = np.arange(1 << closure.n, dtype=np.int64)
    is_sub = (masks & ~np.int64(R.mask)) == 0
    candidates = is_sub & ~rejected
    candidates[0] = False
    if not candidates.any():
        return 0
    sizes = _lattice.popcounts(closure.n)
    return int(sizes[np.nonzero(candidates)[0]].max())


def confidence_sets(closure: ClosureResult, R: IndexSet,
                    hyps: Optional[HypothesisSet] = None) -> ConfidenceSet:
    """Exact simultaneous confidence statement for tau(R) and phi(R)."""
    t = t_alpha(closure, R)
    names = tuple(R.names(hyps)) if hyps is not None else None
    return ConfidenceSet(R=R, alpha=closure.alpha, t_upper=t, provenance=EXACT,
                         method=f"closure[{closure.test_description}]",
                         set_names=names)


def defining_rejections(closure: ClosureResult) -> list[IndexSet]:
    """Inclusion-minimal rejected sets, sorted by size then colex order."""
    masks = _lattice.minimal_members(closure.rejected)
    out = [IndexSet(int(m), closure.n) for m in masks]
    out.sort(key=lambda s: (len(s), s.mask))
    return out


def t_alpha_all_sets(closure: ClosureResult) -> np.ndarray:
    """t_alpha(R) for every mask R at once via a subset-max sweep.

    Used by the simulation harnesses where all 2**n - 1 choices of R are
    audited against a known truth.
    """
    n = closure.n
    sizes = _lattice.popcounts(n).astype(np.int8)
    best = np.where(closure.rejected, np.int8(-1), sizes)
    best[0] = 0
    return _lattice.subset_max(best)
