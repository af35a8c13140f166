"""The block Weyl group inside S_r x Z_2^r and its actions.

Elements act on r GL blocks.  The normal form applies the sign changes
first and the permutation second; block coordinates f_1..f_r span the real
Lie algebra of the split component, with C_B negating the coordinates in B
and the permutation part relabelling them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .datum import InducingDatum
from .errors import CapExceeded, RankMismatch

ENUMERATION_CAP = 7


@dataclass(frozen=True, order=True)
class SignedBlockPermutation:
    """Element (perm, signs) of S_r x Z_2^r in signs-first normal form.

    perm is a 0-based image tuple (block i+1 maps to perm[i]+1); signs is a
    bitmask with bit i meaning the sign change C_{i+1} is applied before
    permuting.
    """

    perm: tuple[int, ...]
    signs: int

    @property
    def r(self) -> int:
        return len(self.perm)

    @property
    def is_sign_change(self) -> bool:
        return all(p == i for i, p in enumerate(self.perm))

    @property
    def sign_set(self) -> frozenset[int]:
        """1-based blocks whose sign is changed."""
        return frozenset(i + 1 for i in range(self.r) if self.signs >> i & 1)

    def __str__(self) -> str:
        cycles = [c for c in _perm_cycles(self.perm) if len(c) > 1]
        parts = []
        if cycles:
            parts.append("".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cycles))
        if self.signs:
            parts.append("C{" + ",".join(str(i) for i in sorted(self.sign_set)) + "}")
        return "·".join(parts) if parts else "1"


def _perm_cycles(perm: tuple[int, ...]) -> list[tuple[int, ...]]:
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cycle.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        cycles.append(tuple(cycle))
    return cycles


def identity(r: int) -> SignedBlockPermutation:
    return SignedBlockPermutation(tuple(range(r)), 0)


def sign_change(r: int, blocks: Iterable[int]) -> SignedBlockPermutation:
    """C_B for a 1-based block set."""
    mask = 0
    for i in blocks:
        mask |= 1 << (i - 1)
    return SignedBlockPermutation(tuple(range(r)), mask)


def block_sign_change(r: int, i: int) -> SignedBlockPermutation:
    return sign_change(r, (i,))


def transposition(r: int, i: int, j: int) -> SignedBlockPermutation:
    """w_ij swapping 1-based blocks i and j."""
    perm = list(range(r))
    perm[i - 1], perm[j - 1] = perm[j - 1], perm[i - 1]
    return SignedBlockPermutation(tuple(perm), 0)


def compose(
    w1: SignedBlockPermutation, w2: SignedBlockPermutation
) -> SignedBlockPermutation:
    """Apply w2 first, then w1."""
    if w1.r != w2.r:
        raise RankMismatch(f"cannot compose elements of ranks {w1.r} and {w2.r}")
    perm = tuple(w1.perm[w2.perm[i]] for i in range(w1.r))
    signs = w2.signs
    for i in range(w1.r):
        if w1.signs >> w2.perm[i] & 1:
            signs ^= 1 << i
    return SignedBlockPermutation(perm, signs)


def inverse(w: SignedBlockPermutation) -> SignedBlockPermutation:
    pinv = [0] * w.r
    signs = 0
    for i, p in enumerate(w.perm):
        pinv[p] = i
        if w.signs >> i & 1:
            signs |= 1 << p
    return SignedBlockPermutation(tuple(pinv), signs)


# --- reduced roots ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class ReducedRoot:
    """Block-level reduced root: alpha(i,j) = f_i - f_{j+1},
    beta(i,j) = f_i + f_{j+1}, gamma(i) = positive multiple of f_i."""

    kind: str
    i: int
    j: int = 0

    def __str__(self) -> str:
        if self.kind == "gamma":
            return f"gamma({self.i})"
        return f"{self.kind}({self.i},{self.j})"

    def coefficients(self) -> tuple[tuple[int, int], ...]:
        """(block, coefficient) pairs, block 1-based."""
        if self.kind == "alpha":
            return ((self.i, 1), (self.j + 1, -1))
        if self.kind == "beta":
            return ((self.i, 1), (self.j + 1, 1))
        return ((self.i, 1),)


def reduced_roots(r: int) -> tuple[ReducedRoot, ...]:
    """All r(r-1) + r reduced roots for r blocks, in a fixed order."""
    roots = []
    for i in range(1, r):
        for j in range(i, r):
            roots.append(ReducedRoot("alpha", i, j))
    for i in range(1, r):
        for j in range(i, r):
            roots.append(ReducedRoot("beta", i, j))
    for i in range(1, r + 1):
        roots.append(ReducedRoot("gamma", i))
    return tuple(roots)


def act_on_root(
    w: SignedBlockPermutation, root: ReducedRoot
) -> tuple[ReducedRoot, int]:
    """Image of a root under w, as (normalized root, sign).

    The sign is -1 when the image expression is negative under the
    lexicographic convention (leading nonzero block coefficient negative).
    """
    terms = []
    for block, coeff in root.coefficients():
        if w.signs >> (block - 1) & 1:
            coeff = -coeff
        terms.append((w.perm[block - 1] + 1, coeff))
    terms.sort()
    sign = 1
    if terms[0][1] < 0:
        sign = -1
        terms = [(b, -c) for b, c in terms]
    if len(terms) == 1:
        return ReducedRoot("gamma", terms[0][0]), sign
    (a, _), (b, cb) = terms
    kind = "beta" if cb > 0 else "alpha"
    return ReducedRoot(kind, a, b - 1), sign


def negativity_set(w: SignedBlockPermutation, r: int) -> frozenset[ReducedRoot]:
    """R(w) = roots made negative by w."""
    return frozenset(root for root in reduced_roots(r) if act_on_root(w, root)[1] < 0)


# --- action on inducing data ------------------------------------------------


@dataclass(frozen=True)
class ActedDatum:
    """Result of letting a Weyl element act on sigma.

    blocks holds (class label, eps-dualized?) per position.  twist is the
    accumulated rho-twist inside Gamma coming from self-dual blocks.
    residue tracks the formal +-1 exponents of unrecorded central characters
    of non-self-dual classes, keyed by the orbit's smaller label; any
    nonzero entry means the element can never stabilize the GL part.
    """

    blocks: tuple[tuple[str, bool], ...]
    twist: int
    residue: tuple[tuple[str, int], ...]

    @property
    def gl_incompatible(self) -> bool:
        return bool(self.residue)


def pristine(datum: InducingDatum) -> ActedDatum:
    return ActedDatum(tuple((label, False) for label in datum.blocks), 0, ())


def act_on_datum(
    w: SignedBlockPermutation,
    datum: InducingDatum,
    state: Optional[ActedDatum] = None,
) -> ActedDatum:
    """Act on sigma (or on an already-acted state) by w."""
    if state is None:
        state = pristine(datum)
    if w.r != datum.r:
        raise RankMismatch(f"element rank {w.r} != datum rank {datum.r}")
    twist = state.twist
    residue = dict(state.residue)
    for i in range(w.r):
        if not w.signs >> i & 1:
            continue
        label, flipped = state.blocks[i]
        cls = datum.classes[label]
        if cls.self_dual:
            twist ^= cls.omega or 0
        else:
            effective = cls.eps_dual if flipped else label
            rep = min(label, cls.eps_dual)
            residue[rep] = residue.get(rep, 0) + (1 if effective == rep else -1)
            if residue[rep] == 0:
                del residue[rep]
    pinv = [0] * w.r
    for i, p in enumerate(w.perm):
        pinv[p] = i
    blocks = []
    for i in range(w.r):
        src = pinv[i]
        label, flipped = state.blocks[src]
        if w.signs >> src & 1:
            flipped = not flipped
        blocks.append((label, flipped))
    return ActedDatum(tuple(blocks), twist, tuple(sorted(residue.items())))


def effective_label(datum: InducingDatum, block: tuple[str, bool]) -> str:
    label, flipped = block
    return datum.classes[label].eps_dual if flipped else label


# --- enumeration ------------------------------------------------------------


def weyl_order(datum: InducingDatum) -> int:
    """|W(G,A)| = 2^r times the order of the equal-size Young subgroup."""
    counts: dict[int, int] = {}
    for size in datum.block_sizes:
        counts[size] = counts.get(size, 0) + 1
    order = 1 << datum.r
    for count in counts.values():
        order *= math.factorial(count)
    return order


def enumerate_weyl(
    datum: InducingDatum, cap: int = ENUMERATION_CAP
) -> tuple[SignedBlockPermutation, ...]:
    """All of W(G,A), sorted by (perm, signs)."""
    r = datum.r
    if r > cap:
        raise CapExceeded(f"r = {r} exceeds enumeration cap {cap}")
    sizes = datum.block_sizes
    groups: dict[int, list[int]] = {}
    for pos, size in enumerate(sizes):
        groups.setdefault(size, []).append(pos)
    group_lists = [groups[s] for s in sorted(groups)]
    elements = []
    for images in itertools.product(
        *(itertools.permutations(g) for g in group_lists)
    ):
        perm = [0] * r
        for positions, image in zip(group_lists, images):
            for pos, target in zip(positions, image):
                perm[pos] = target
        for signs in range(1 << r):
            elements.append(SignedBlockPermutation(tuple(perm), signs))
    elements.sort()
    return tuple(elements)


# --- fixed subspaces --------------------------------------------------------


@dataclass(frozen=True)
class FixedSubspace:
    """Fixed-point subspace of an element acting on block coordinates.

    Coordinates are constant along each perm cycle; a cycle carrying an odd
    number of sign changes is forced to zero, so dim counts the even cycles.
    """

    dim: int
    zero_coords: frozenset[int]
    cycles: tuple[tuple[int, ...], ...]


def fixed_subspace(w: SignedBlockPermutation) -> FixedSubspace:
    zero: set[int] = set()
    dim = 0
    cycles = []
    for cycle in _perm_cycles(w.perm):
        cycles.append(tuple(i + 1 for i in cycle))
        flips = sum(1 for i in cycle if w.signs >> i & 1)
        if flips % 2:
            zero.update(i + 1 for i in cycle)
        else:
            dim += 1
    return FixedSubspace(dim, frozenset(zero), tuple(cycles))
