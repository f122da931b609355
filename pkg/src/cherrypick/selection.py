"""Rejection-set specifications: explicit names, top:K, or pmax:Q."""

from __future__ import annotations

from .errors import InputError
from .hypotheses import HypothesisSet, IndexSet


def parse_set_spec(spec: str, hyps: HypothesisSet) -> IndexSet:
    """Resolve a set specification against the hypothesis collection.

    "top:K" picks the K most significant hypotheses (smallest p-values, or
    largest z-scores when only scores are present); "pmax:Q" picks every
    hypothesis with p <= Q; anything else is a comma-separated name list.
    The resulting set must be nonempty.
    """
    spec = spec.strip()
    if not spec:
        raise InputError("empty set specification")
    if spec.startswith("top:"):
        k = _parse_int(spec[4:], "top:K")
        if not 1 <= k <= hyps.n:
            raise InputError(f"top:{k} out of range (1..{hyps.n})")
        if hyps.pvalues is not None:
            order = hyps.p_order()
        else:
            zs = hyps.require_zscores()
            order = sorted(range(hyps.n), key=lambda i: (-zs[i], i))
        return IndexSet.from_indices(order[:k], hyps.n)
    if spec.startswith("pmax:"):
        q = _parse_float(spec[5:], "pmax:Q")
        pv = hyps.require_pvalues()
        members = [i for i in range(hyps.n) if pv[i] <= q]
        if not members:
            raise InputError(f"no hypothesis has p <= {q}")
        return IndexSet.from_indices(members, hyps.n)
    names = [x.strip() for x in spec.split(",") if x.strip()]
    if not names:
        raise InputError("empty set specification")
    return IndexSet.from_names(names, hyps)


def _parse_int(raw, what):
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"bad {what}: {raw!r}") from None


def _parse_float(raw, what):
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"bad {what}: {raw!r}") from None
