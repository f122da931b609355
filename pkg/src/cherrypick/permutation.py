"""Permutation-calibrated constant critical values.

The input is a B x n matrix of per-hypothesis p-values, one row per
permutation with the observed (identity) permutation first. Calibration
picks per-rank thresholds k_i as a common empirical quantile of the order
statistics, with the quantile level chosen as high as possible while the
fraction of calibration rows with any ordered p-value at or below its
threshold stays within alpha. The result plugs into the ordered-p-value
local test machinery as a constant critical value family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParseError
from .hypotheses import HypothesisSet, make_hypotheses
from .localtests import CriticalValueFamily, constant_family

MIN_ROWS = 20


@dataclass(frozen=True)
class PermutationPValues:
    """B x n p-value matrix; row 0 must be the observed data."""

    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2:
            raise InputError("permutation p-values must form a 2-d matrix")
        if m.shape[0] < MIN_ROWS:
            raise InputError(f"need at least {MIN_ROWS} permutation rows, got {m.shape[0]}")
        if not np.all((m >= 0.0) & (m <= 1.0)):
            raise InputError("permutation p-values must lie in [0, 1]")

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    def observed(self) -> np.ndarray:
        return self.matrix[0]

    @classmethod
    def from_csv(cls, source: str) -> "PermutationPValues":
        rows = []
        width = None
        for lineno, line in enumerate(source.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if width is None:
                width = len(parts)
            elif len(parts) != width:
                raise ParseError(f"expected {width} columns, got {len(parts)}", line=lineno)
            try:
                rows.append([float(x) for x in parts])
            except ValueError:
                raise ParseError("bad number in permutation matrix", line=lineno) from None
        if not rows:
            raise ParseError("empty permutation matrix")
        return cls(np.asarray(rows, dtype=float))


def calibrate_critvals(perms: PermutationPValues, alpha: float) -> CriticalValueFamily:
    """Pick constant per-rank thresholds with joint exceedance <= alpha.

    Candidate j means: threshold k_i is the j-th smallest value of the i-th
    order-statistic column. j is maximized by integer bisection (resolution
    1/B, at most 50 steps) subject to: the fraction of calibration rows
    whose sorted p-values hit any threshold (same <= comparison the test
    uses) stays within alpha. When the joint event is so wide that even the
    column minima are hit too often, the thresholds drop one float notch
    below the minima (j = 0), which zeroes the calibration exceedance and
    stays valid, just conservative.
    """
    if not 0.0 < alpha < 1.0:
        raise InputError(f"alpha must be in (0, 1), got {alpha}")
    B = perms.rows
    if B * alpha < 1.0:
        raise InputError(f"too few rows for calibration: need B * alpha >= 1, "
                         f"got B={B}, alpha={alpha}")
    if np.all(perms.matrix == perms.matrix[0]):
        raise InputError("degenerate permutation matrix: all rows identical")
    order_stats = np.sort(perms.matrix, axis=1)
    sorted_cols = np.sort(order_stats, axis=0)

    def thresholds(j: int) -> np.ndarray:
        if j == 0:
            return np.clip(np.nextafter(sorted_cols[0], -np.inf), 0.0, 1.0)
        return sorted_cols[j - 1]

    def exceedance(j: int) -> float:
        return float(np.any(order_stats <= thresholds(j), axis=1).mean())

    if exceedance(0) > alpha:
        raise InputError("calibration impossible: rows hit sub-minimum thresholds "
                         "more often than alpha (exact zeros in the matrix?)")
    lo, hi = 0, B  # invariant: lo feasible, everything above hi infeasible
    if exceedance(B) <= alpha:
        lo = B
    else:
        for _ in range(50):
            if hi - lo <= 1:
                break
            mid = (lo + hi) // 2
            if exceedance(mid) <= alpha:
                lo = mid
            else:
                hi = mid
    return constant_family(thresholds(lo), calibration_alpha=alpha)


def joint_exceedance(perms: PermutationPValues, family: CriticalValueFamily) -> float:
    """Fraction of rows with some ordered p-value at or below its threshold."""
    thresholds = np.asarray(family.constants, dtype=float)
    if thresholds.shape[0] != perms.n:
        raise InputError("threshold count does not match matrix width")
    order_stats = np.sort(perms.matrix, axis=1)
    return float(np.any(order_stats <= thresholds, axis=1).mean())


def parse_name_list(source: str) -> list[str]:
    names = [line.strip() for line in source.splitlines() if line.strip()]
    if not names:
        raise ParseError("empty name list")
    return names


def hypotheses_from_perms(perms: PermutationPValues, names: list[str]) -> HypothesisSet:
    """Observed hypotheses: names from the sidecar list, p-values from row 0."""
    if len(names) != perms.n:
        raise InputError(f"{len(names)} names for {perms.n} matrix columns")
    return make_hypotheses(names, pvalues=perms.observed())
