"""Confidence-set report shared by the exact engine and the shortcuts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .hypotheses import IndexSet

EXACT = "exact"
UPPER_BOUND = "upper-bound"


@dataclass(frozen=True)
class ConfidenceSet:
    """Simultaneous (1 - alpha) confidence statement for one rejected set R.

    t_upper bounds the number of false rejections in R from above (exactly,
    or soundly when produced by a shortcut); f_lower = #R - t_upper bounds
    the correct rejections from below. The integer sets and the FDP bound
    are derived views of the same numbers.
    """

    R: IndexSet
    alpha: float
    t_upper: int
    provenance: str
    method: str
    set_names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if not 0 <= self.t_upper <= len(self.R):
            raise ValueError(f"t_upper {self.t_upper} out of range for #R={len(self.R)}")
        if self.provenance not in (EXACT, UPPER_BOUND):
            raise ValueError(f"bad provenance {self.provenance!r}")

    @property
    def size(self) -> int:
        return len(self.R)

    @property
    def f_lower(self) -> int:
        return self.size - self.t_upper

    @property
    def tau_set(self) -> range:
        return range(0, self.t_upper + 1)

    @property
    def phi_set(self) -> range:
        return range(self.f_lower, self.size + 1)

    @property
    def fdp_upper(self) -> Fraction:
        return Fraction(self.t_upper, self.size)

    def as_dict(self) -> dict:
        d = {
            "size": self.size,
            "alpha": self.alpha,
            "t_upper": self.t_upper,
            "f_lower": self.f_lower,
            "tau_set": {"lo": 0, "hi": self.t_upper},
            "phi_set": {"lo": self.f_lower, "hi": self.size},
            "fdp_upper": {
                "numerator": self.fdp_upper.numerator,
                "denominator": self.fdp_upper.denominator,
                "value": f"{float(self.fdp_upper):.4f}",
            },
            "provenance": self.provenance,
            "method": self.method,
        }
        if self.set_names is not None:
            d["set"] = list(self.set_names)
        else:
            d["set_indices"] = [i + 1 for i in sorted(self.R.indices())]
        return d
