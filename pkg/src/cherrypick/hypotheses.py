"""Data model for elementary hypotheses and index sets.

Hypotheses are named and carry raw p-values and/or z-scores. Index sets are
bitmasks over positions 1..n (stored 0-based internally) so subset tests,
complements and cardinality are cheap word operations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InputError, ParseError

# Hard caps: the exact closure is exponential, shortcut paths are polynomial.
FULL_CLOSURE_CAP = 25
SHORTCUT_CAP = 10**6

# p-values of exactly zero are clamped here so -2 log p stays finite.
P_CLAMP = 1e-300

_NAME_RE = re.compile(r"^[A-Za-z0-9_-]+$")


@dataclass(frozen=True)
class HypothesisSet:
    """Named elementary hypotheses with p-values and/or z-scores.

    Immutable after construction; validation happens once, here.
    """

    names: tuple[str, ...]
    pvalues: Optional[tuple[float, ...]] = None
    zscores: Optional[tuple[float, ...]] = None
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        n = len(self.names)
        if n < 1:
            raise InputError("need at least one hypothesis")
        if n > SHORTCUT_CAP:
            raise InputError(f"too many hypotheses ({n} > {SHORTCUT_CAP})")
        if self.pvalues is None and self.zscores is None:
            raise InputError("need p-values or z-scores")
        if len(set(self.names)) != n:
            dupes = sorted({x for x in self.names if self.names.count(x) > 1})
            raise InputError(f"duplicate hypothesis names: {', '.join(dupes)}")
        for name in self.names:
            if not _NAME_RE.match(name):
                raise InputError(
                    f"invalid hypothesis name {name!r} (allowed: letters, digits, _ and -)")
        if self.pvalues is not None:
            if len(self.pvalues) != n:
                raise InputError("pvalues length does not match names")
            for name, p in zip(self.names, self.pvalues):
                if not 0.0 < p <= 1.0:
                    raise InputError(f"p-value out of range for {name}: {p}")
        if self.zscores is not None and len(self.zscores) != n:
            raise InputError("zscores length does not match names")

    @property
    def n(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown hypothesis name: {name}") from None

    def require_pvalues(self) -> tuple[float, ...]:
        if self.pvalues is None:
            raise InputError("this analysis needs p-values but the input has none")
        return self.pvalues

    def require_zscores(self) -> tuple[float, ...]:
        if self.zscores is None:
            raise InputError("this analysis needs z-scores but the input has none")
        return self.zscores

    def p_order(self) -> list[int]:
        """Indices sorted by ascending p-value, ties kept in input order."""
        pv = self.require_pvalues()
        return sorted(range(self.n), key=lambda i: (pv[i], i))


def make_hypotheses(names: Sequence[str], pvalues: Sequence[float] = None,
                    zscores: Sequence[float] = None) -> HypothesisSet:
    """Build a HypothesisSet, clamping p = 0 to P_CLAMP with a warning."""
    warnings = []
    pv = None
    if pvalues is not None:
        pv = []
        for name, p in zip(names, pvalues):
            p = float(p)
            if p == 0.0:
                warnings.append(f"p-value 0 for {name} clamped to {P_CLAMP:g}")
                p = P_CLAMP
            pv.append(p)
        pv = tuple(pv)
    zs = tuple(float(z) for z in zscores) if zscores is not None else None
    return HypothesisSet(tuple(names), pv, zs, tuple(warnings))


def parse_hypotheses(source: str) -> HypothesisSet:
    """Parse the `name,p` / `name,z` CSV format.

    Header decides which statistic the column holds. p-values outside [0, 1]
    are rejected; exactly-zero p-values are clamped with a warning.
    """
    lines = source.splitlines()
    rows = [(i + 1, line.strip()) for i, line in enumerate(lines) if line.strip()]
    if not rows:
        raise ParseError("empty input")
    header_line, header = rows[0]
    cols = [c.strip() for c in header.split(",")]
    if cols == ["name", "p"]:
        value_kind = "p"
    elif cols == ["name", "z"]:
        value_kind = "z"
    else:
        raise ParseError(f"expected header 'name,p' or 'name,z', got {header!r}",
                         line=header_line)
    names, values = [], []
    for lineno, line in rows[1:]:
        parts = [c.strip() for c in line.split(",")]
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, got {len(parts)}", line=lineno)
        name, raw = parts
        if not _NAME_RE.match(name):
            raise ParseError(f"invalid name {name!r}", line=lineno)
        if name in names:
            raise ParseError(f"duplicate name {name!r}", line=lineno)
        try:
            value = float(raw)
        except ValueError:
            raise ParseError(f"bad number {raw!r}", line=lineno) from None
        if value_kind == "p" and not 0.0 <= value <= 1.0:
            raise ParseError(f"p-value out of range: {value}", line=lineno)
        names.append(name)
        values.append(value)
    if not names:
        raise ParseError("no data rows")
    if value_kind == "p":
        return make_hypotheses(names, pvalues=values)
    return make_hypotheses(names, zscores=values)


@dataclass(frozen=True, order=True)
class IndexSet:
    """A subset of {1..n} stored as a bitmask (bit i-1 holds member i).

    Integer ordering of masks equals colexicographic ordering of sets, which
    is the canonical enumeration order everywhere in this package.
    """

    mask: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise InputError("ambient size must be nonnegative")
        if self.mask < 0 or self.mask >> self.n:
            raise InputError(f"mask {self.mask:#x} outside ambient set of size {self.n}")

    @classmethod
    def from_indices(cls, indices: Iterable[int], n: int) -> "IndexSet":
        mask = 0
        for i in indices:
            if not 0 <= i < n:
                raise InputError(f"index {i} out of range for n={n}")
            mask |= 1 << i
        return cls(mask, n)

    @classmethod
    def from_names(cls, names: Iterable[str], hyps: HypothesisSet) -> "IndexSet":
        return cls.from_indices((hyps.index_of(x) for x in names), hyps.n)

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls((1 << n) - 1, n)

    @classmethod
    def empty(cls, n: int) -> "IndexSet":
        return cls(0, n)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, index: int) -> bool:
        return 0 <= index < self.n and bool(self.mask >> index & 1)

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def indices(self) -> list[int]:
        return list(self)

    def names(self, hyps: HypothesisSet) -> list[str]:
        return [hyps.names[i] for i in self]

    def complement(self) -> "IndexSet":
        return IndexSet(~self.mask & (1 << self.n) - 1, self.n)

    def union(self, other: "IndexSet") -> "IndexSet":
        self._check_ambient(other)
        return IndexSet(self.mask | other.mask, self.n)

    def intersection(self, other: "IndexSet") -> "IndexSet":
        self._check_ambient(other)
        return IndexSet(self.mask & other.mask, self.n)

    def difference(self, other: "IndexSet") -> "IndexSet":
        self._check_ambient(other)
        return IndexSet(self.mask & ~other.mask, self.n)

    def issubset(self, other: "IndexSet") -> bool:
        self._check_ambient(other)
        return self.mask & ~other.mask == 0

    def issuperset(self, other: "IndexSet") -> bool:
        return other.issubset(self)

    def _check_ambient(self, other):
        if self.n != other.n:
            raise InputError(f"ambient sizes differ: {self.n} vs {other.n}")

    def __repr__(self):
        return f"IndexSet({sorted(self.indices())}, n={self.n})"


def subsets_of_size(R: IndexSet, k: int) -> Iterator[IndexSet]:
    """Yield all size-k subsets of R exactly once, in colexicographic order.

    Gosper's hack enumerates same-popcount masks in increasing integer order
    over the compressed positions of R, then each mask is expanded back to
    the ambient indices. Integer order on masks is colex order on sets.
    """
    r = len(R)
    if not 0 <= k <= r:
        raise InputError(f"subset size {k} out of range for a set of size {r}")
    positions = R.indices()
    if k == 0:
        yield IndexSet.empty(R.n)
        return
    mask = (1 << k) - 1
    limit = 1 << r
    while mask < limit:
        expanded = 0
        m = mask
        while m:
            low = m & -m
            expanded |= 1 << positions[low.bit_length() - 1]
            m ^= low
        yield IndexSet(expanded, R.n)
        # Gosper: next integer with the same popcount.
        c = mask & -mask
        rr = mask + c
        mask = (((rr ^ mask) >> 2) // c) | rr
