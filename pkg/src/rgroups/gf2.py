"""GF(2) linear algebra over int bitsets."""

from __future__ import annotations

from typing import Iterable, List, Optional, Tuple


def span(vectors: Iterable[int]) -> frozenset[int]:
    """Return the XOR-span of the given bitset vectors (always contains 0)."""
    out = {0}
    for v in vectors:
        if v in out:
            continue
        out |= {v ^ w for w in out}
    return frozenset(out)


def reduce_basis(vectors: Iterable[int]) -> List[int]:
    """Greedily keep the vectors that are XOR-independent, in input order."""
    basis: List[int] = []
    seen = {0}
    for v in vectors:
        if v not in seen:
            basis.append(v)
            seen |= {v ^ w for w in seen}
    return basis


def rank(vectors: Iterable[int]) -> int:
    return len(reduce_basis(vectors))


def solve(basis: List[int], target: int) -> Optional[Tuple[int, ...]]:
    """Express target as a XOR-combination of basis vectors.

    Returns a 0/1 coefficient tuple aligned with basis, or None when target
    is outside the span.  The basis need not be row-reduced but must be
    independent for the coefficients to be unique.
    """
    # Forward-eliminate once; each stored row has its pivot as highest bit,
    # with a companion mask recording which basis vectors were mixed in.
    pivots: dict[int, Tuple[int, int]] = {}  # pivot bit -> (row, combo)
    for idx, row in enumerate(basis):
        combo = 1 << idx
        while row:
            bit = row.bit_length() - 1
            if bit not in pivots:
                pivots[bit] = (row, combo)
                break
            prow, pcombo = pivots[bit]
            row ^= prow
            combo ^= pcombo
    acc = target
    combo = 0
    while acc:
        bit = acc.bit_length() - 1
        if bit not in pivots:
            return None
        prow, pcombo = pivots[bit]
        acc ^= prow
        combo ^= pcombo
    return tuple(combo >> i & 1 for i in range(len(basis)))


def in_span(vectors: List[int], target: int) -> bool:
    return solve(reduce_basis(vectors), target) is not None
