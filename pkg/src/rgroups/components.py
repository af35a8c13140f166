"""Constituents of the induced representation and their elliptic signs.

Each character kappa of the elementary 2-group R labels one irreducible
constituent (multiplicity one).  When the instance is elliptic, the sign
epsilon(kappa) = kappa(C_1...C_r) relates the constituent's elliptic
character to that of the base constituent, and the signs sum to zero.
Sub-R-groups for the one-block-smaller Levis, generator systems adapted to
them, and the restriction fibers realize the induction structure behind
that sign relation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from . import gf2, weyl
from .datum import InducingDatum
from .errors import NotElliptic
from .rgroup import RGroupDescriptor, descriptor_from_elements
from .weyl import SignedBlockPermutation


@dataclass(frozen=True)
class RCharacter:
    """Character of R given by its signs on a fixed generator list."""

    signs: tuple[int, ...]

    @property
    def name(self) -> str:
        return "(" + ",".join("+" if s > 0 else "-" for s in self.signs) + ")"

    def product(self, other: "RCharacter") -> "RCharacter":
        return RCharacter(tuple(a * b for a, b in zip(self.signs, other.signs)))

    @property
    def is_trivial(self) -> bool:
        return all(s > 0 for s in self.signs)


def generator_list(R: RGroupDescriptor) -> tuple[int, ...]:
    """Canonical generator masks for R-hat bookkeeping.

    Elliptic instances use the adapted system of Lemma 3.8 so that kappa
    identifiers stay aligned with the sub-R-group structure; otherwise the
    greedy basis from the sorted element list is used.
    """
    if R.d == 0:
        return ()
    if R.is_elliptic:
        omega, _ = adapted_generators(R)
        return omega
    return tuple(R.canonical_basis())


def characters_of_R(
    R: RGroupDescriptor, basis: Optional[Sequence[int]] = None
) -> tuple[RCharacter, ...]:
    """All 2^d characters, in lexicographic sign-vector order (+ before -)."""
    if basis is None:
        basis = generator_list(R)
    assert len(basis) == R.d
    return tuple(
        RCharacter(signs) for signs in itertools.product((1, -1), repeat=len(basis))
    )


def evaluate(
    kappa: RCharacter, basis: Sequence[int], w: SignedBlockPermutation | int
) -> int:
    """kappa(w) by multiplicativity over the generator expansion of w."""
    mask = w if isinstance(w, int) else w.signs
    coords = gf2.solve(list(basis), mask)
    if coords is None:
        raise ValueError("element outside the span of the generator list")
    value = 1
    for sign, coeff in zip(kappa.signs, coords):
        if coeff:
            value *= sign
    return value


def epsilon_sign(
    kappa: RCharacter, R: RGroupDescriptor, basis: Optional[Sequence[int]] = None
) -> Optional[int]:
    """kappa(C_1...C_r) for elliptic instances, None otherwise."""
    if not R.is_elliptic:
        return None
    if basis is None:
        basis = generator_list(R)
    if R.r == 0:
        return 1
    return evaluate(kappa, basis, R.full_mask)


def sub_rgroup(R: RGroupDescriptor, j: frozenset[int]) -> RGroupDescriptor:
    """R_J: the elements of R whose sign set avoids the 1-based set J.

    Only offered under ellipticity, where Delta' = emptyset makes the
    smaller Levi compatible; anything else is refused.
    """
    if not R.is_elliptic:
        raise NotElliptic("sub-R-groups require an elliptic instance")
    j_mask = 0
    for i in j:
        j_mask |= 1 << (i - 1)
    elements = tuple(w for w in R.elements if w.signs & j_mask == 0)
    return descriptor_from_elements(R.r, elements)


def adapted_generators(
    R: RGroupDescriptor,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Generator system Omega with certificate (j_1..j_d): dropping the k-th
    generator spans exactly the sub-R-group avoiding block j_k.

    Stage k pins j_k to the smallest supported block of the k-th generator
    and multiplies every other generator containing j_k by it, so later
    stages never reintroduce earlier pins.
    """
    if not R.is_elliptic:
        raise NotElliptic("adapted generators require an elliptic instance")
    gens = list(R.canonical_basis())
    pins = []
    for k in range(len(gens)):
        mask = gens[k]
        assert mask, "generator basis contains the identity"
        pin = (mask & -mask).bit_length() - 1  # lowest set bit
        assert pin + 1 not in pins
        for i in range(len(gens)):
            if i != k and gens[i] >> pin & 1:
                gens[i] ^= mask
        pins.append(pin + 1)
    omega = tuple(gens)
    certificate = tuple(pins)
    for k, pin in enumerate(certificate):
        rest = [g for i, g in enumerate(omega) if i != k]
        expected = sub_rgroup(R, frozenset({pin})).masks
        assert gf2.span(rest) == expected, "adapted certificate failed"
    return omega, certificate


def restriction_fibers(
    R: RGroupDescriptor,
    j: frozenset[int],
    kappa_prime: RCharacter,
    basis: Optional[Sequence[int]] = None,
) -> tuple[RCharacter, ...]:
    """Characters of R restricting to kappa_prime on R_J.

    kappa_prime is a character of sub_rgroup(R, j) on that group's own
    canonical basis.
    """
    if basis is None:
        basis = generator_list(R)
    rj = sub_rgroup(R, j)
    rj_basis = rj.canonical_basis()
    fiber = []
    for kappa in characters_of_R(R, basis):
        if all(
            evaluate(kappa, basis, g) == evaluate(kappa_prime, rj_basis, g)
            for g in rj_basis
        ):
            fiber.append(kappa)
    return tuple(fiber)


@dataclass(frozen=True)
class ComponentRow:
    kappa: RCharacter
    epsilon: Optional[int]
    multiplicity: int = 1


@dataclass(frozen=True)
class ComponentTable:
    rows: tuple[ComponentRow, ...]
    basis: tuple[int, ...]
    w0: Optional[SignedBlockPermutation]
    epsilon_sum: Optional[int]

    @property
    def count(self) -> int:
        return len(self.rows)


def component_table(datum: InducingDatum, R: RGroupDescriptor) -> ComponentTable:
    """One row per constituent, with elliptic signs when they exist."""
    basis = generator_list(R)
    elliptic = R.is_elliptic
    rows = []
    total = 0
    for kappa in characters_of_R(R, basis):
        eps = epsilon_sign(kappa, R, basis) if elliptic else None
        if eps is not None:
            total += eps
        rows.append(ComponentRow(kappa, eps))
    w0 = weyl.sign_change(R.r, range(1, R.r + 1)) if elliptic else None
    return ComponentTable(tuple(rows), basis, w0, total if elliptic else None)
