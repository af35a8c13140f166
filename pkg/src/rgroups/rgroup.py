"""The Knapp-Stein R-group: definitional filter and closed form.

Two independent routes to the same object.  brute_force_R applies the
definition R = {w in W(sigma) : w keeps Delta' positive} to the enumerated
Weyl group; closed_form_R assembles generators from the index sets I_1 and
I_chi and from a basis of the minimally rho-trivial families.  They must
agree as element sets on every instance, which the oracle module enforces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional

from . import gf2, weyl
from .datum import InducingDatum, ODD_FAMILIES, twist_matters
from .errors import CapExceeded, FamilyMismatch
from .weyl import ReducedRoot, SignedBlockPermutation


def w_sigma_membership(w: SignedBlockPermutation, datum: InducingDatum) -> bool:
    """Whether w stabilizes the class of sigma."""
    acted = weyl.act_on_datum(w, datum)
    for pos, block in enumerate(acted.blocks):
        if weyl.effective_label(datum, block) != datum.blocks[pos]:
            return False
    # A blockwise match forces the unrecorded central characters of
    # non-self-dual classes to cancel exactly.
    assert not acted.residue, f"residual twist after blockwise match: {acted}"
    if twist_matters(datum.family):
        return acted.twist in datum.x_rho
    return True


def enumerate_w_sigma(
    datum: InducingDatum, cap: int = weyl.ENUMERATION_CAP
) -> tuple[SignedBlockPermutation, ...]:
    return tuple(
        w for w in weyl.enumerate_weyl(datum, cap) if w_sigma_membership(w, datum)
    )


@dataclass(frozen=True)
class DeltaPrime:
    """The reduced roots with vanishing rank-one Plancherel factor."""

    roots: frozenset[ReducedRoot]

    def __contains__(self, root: ReducedRoot) -> bool:
        return root in self.roots

    def sorted(self) -> tuple[ReducedRoot, ...]:
        return tuple(sorted(self.roots))


def compute_delta_prime(datum: InducingDatum) -> DeltaPrime:
    """alpha(i,j) for equivalent blocks, beta(i,j) for eps-dual ones, and
    gamma(i) when C_i stabilizes sigma but the rank-one induction stays
    irreducible (x_holds false)."""
    r = datum.r
    roots = set()
    for i in range(1, r):
        for j in range(i, r):
            if datum.blocks[i - 1] == datum.blocks[j]:
                roots.add(ReducedRoot("alpha", i, j))
            if datum.blocks[i - 1] == datum.classes[datum.blocks[j]].eps_dual:
                roots.add(ReducedRoot("beta", i, j))
    for i in range(1, r + 1):
        cls = datum.block_class(i)
        if not cls.x_holds and w_sigma_membership(
            weyl.block_sign_change(r, i), datum
        ):
            roots.add(ReducedRoot("gamma", i))
    return DeltaPrime(frozenset(roots))


def reflection(root: ReducedRoot, r: int) -> SignedBlockPermutation:
    """The Weyl reflection determined by a reduced root."""
    if root.kind == "alpha":
        return weyl.transposition(r, root.i, root.j + 1)
    if root.kind == "beta":
        swap = weyl.transposition(r, root.i, root.j + 1)
        return weyl.compose(swap, weyl.sign_change(r, (root.i, root.j + 1)))
    return weyl.block_sign_change(r, root.i)


def generate_subgroup(
    generators: list[SignedBlockPermutation], r: int
) -> tuple[SignedBlockPermutation, ...]:
    """Closure of the generators under composition, sorted."""
    elements = {weyl.identity(r)}
    frontier = [weyl.identity(r)]
    while frontier:
        nxt = []
        for w in frontier:
            for g in generators:
                prod = weyl.compose(g, w)
                if prod not in elements:
                    elements.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return tuple(sorted(elements))


def compute_w_prime(
    datum: InducingDatum,
    delta: Optional[DeltaPrime] = None,
    cap: int = weyl.ENUMERATION_CAP,
) -> tuple[SignedBlockPermutation, ...]:
    """The reflection subgroup W' attached to Delta'."""
    if datum.r > cap:
        raise CapExceeded(f"r = {datum.r} exceeds cap {cap}")
    if delta is None:
        delta = compute_delta_prime(datum)
    gens = [reflection(root, datum.r) for root in delta.sorted()]
    return generate_subgroup(gens, datum.r)


def brute_force_R(
    datum: InducingDatum,
    delta: Optional[DeltaPrime] = None,
    cap: int = weyl.ENUMERATION_CAP,
) -> tuple[SignedBlockPermutation, ...]:
    """The R-group by definition: stabilizer elements keeping Delta' positive."""
    if delta is None:
        delta = compute_delta_prime(datum)
    out = []
    for w in weyl.enumerate_weyl(datum, cap):
        if not w_sigma_membership(w, datum):
            continue
        if all(weyl.act_on_root(w, root)[1] > 0 for root in delta.roots):
            out.append(w)
    return tuple(out)


# --- index sets and the GF(2) machinery --------------------------------------


@dataclass(frozen=True)
class IndexSets:
    """The block index sets J_1, J_chi and their deduplicated forms I_1,
    I_chi, which keep the last occurrence of each class.

    Keys of the chi maps are the characters in Gamma outside X(rho) whose
    J-set is nonempty.
    """

    j1: frozenset[int]
    i1: frozenset[int]
    j_chi: Mapping[int, frozenset[int]]
    i_chi: Mapping[int, frozenset[int]]

    @property
    def d1(self) -> int:
        return len(self.i1)

    @property
    def d_chi(self) -> dict[int, int]:
        return {chi: len(members) for chi, members in self.i_chi.items()}

    @property
    def i0(self) -> frozenset[int]:
        out = set(self.i1)
        for members in self.i_chi.values():
            out |= members
        return frozenset(out)


def _last_occurrences(datum: InducingDatum, indices: frozenset[int]) -> frozenset[int]:
    keep = set()
    for i in indices:
        label = datum.blocks[i - 1]
        if all(datum.blocks[j - 1] != label for j in range(i + 1, datum.r + 1)):
            keep.add(i)
    return frozenset(keep)


def index_sets(datum: InducingDatum) -> IndexSets:
    j1 = frozenset(
        i for i in range(1, datum.r + 1) if datum.block_class(i).x_holds
    )
    j_chi: dict[int, frozenset[int]] = {}
    if twist_matters(datum.family):
        for chi in sorted(set(datum.gamma.elements()) - datum.x_rho.members):
            members = frozenset(
                i
                for i in range(1, datum.r + 1)
                if datum.block_class(i).self_dual
                and datum.block_class(i).omega == chi
            )
            if members:
                j_chi[chi] = members
    i_chi = {chi: _last_occurrences(datum, m) for chi, m in j_chi.items()}
    return IndexSets(j1, _last_occurrences(datum, j1), j_chi, i_chi)


@dataclass(frozen=True)
class LambdaFamily:
    """Minimally rho-trivial character sets with d_chi >= 1 throughout,
    together with a canonical XOR basis of the family."""

    universe: tuple[int, ...]
    members: tuple[frozenset[int], ...]
    basis: tuple[frozenset[int], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def indicator(self, member: frozenset[int]) -> int:
        mask = 0
        for pos, chi in enumerate(self.universe):
            if chi in member:
                mask |= 1 << pos
        return mask

    def covers(self, chi: int) -> bool:
        return any(chi in member for member in self.members)


def minimally_rho_trivial(chars: frozenset[int], x_rho) -> bool:
    """Nonempty, product in X(rho), and no proper nonempty sub-product is."""
    if not chars:
        return False
    total = 0
    for chi in chars:
        total ^= chi
    if total not in x_rho:
        return False
    items = sorted(chars)
    for k in range(1, len(items)):
        for subset in itertools.combinations(items, k):
            acc = 0
            for chi in subset:
                acc ^= chi
            if acc in x_rho:
                return False
    return True


def lambda_family(
    datum: InducingDatum, isets: Optional[IndexSets] = None
) -> LambdaFamily:
    if isets is None:
        isets = index_sets(datum)
    universe = tuple(sorted(chi for chi, d in isets.d_chi.items() if d >= 1))
    members = []
    for k in range(1, len(universe) + 1):
        for combo in itertools.combinations(universe, k):
            cand = frozenset(combo)
            if minimally_rho_trivial(cand, datum.x_rho):
                members.append(cand)
    members.sort(key=lambda s: (len(s), tuple(sorted(s))))
    fam = LambdaFamily(universe, tuple(members), ())
    basis = []
    chosen_masks: list[int] = []
    for member in members:
        mask = fam.indicator(member)
        if gf2.solve(chosen_masks, mask) is None:
            basis.append(member)
            chosen_masks.append(mask)
    return LambdaFamily(universe, tuple(members), tuple(basis))


# --- descriptors and the closed form ------------------------------------------


@dataclass(frozen=True)
class RGenerators:
    """Closed-form generators as sign masks, grouped by provenance."""

    r1: tuple[int, ...]
    chi: tuple[tuple[int, tuple[int, ...]], ...]
    lam: tuple[int, ...]

    def flat(self) -> tuple[int, ...]:
        out = list(self.r1)
        for _, masks in self.chi:
            out.extend(masks)
        out.extend(self.lam)
        return tuple(out)


@dataclass(frozen=True)
class RGroupDescriptor:
    r: int
    elements: tuple[SignedBlockPermutation, ...]
    d: int
    generators: Optional[RGenerators] = None
    index_sets: Optional[IndexSets] = None
    lam: Optional[LambdaFamily] = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def masks(self) -> frozenset[int]:
        assert all(w.is_sign_change for w in self.elements)
        return frozenset(w.signs for w in self.elements)

    @property
    def support(self) -> frozenset[int]:
        out: set[int] = set()
        for w in self.elements:
            out |= w.sign_set
        return frozenset(out)

    @property
    def full_mask(self) -> int:
        return (1 << self.r) - 1

    @property
    def is_elliptic(self) -> bool:
        """Proposition-3.3 test: the total sign change lies in R."""
        if self.r == 0:
            return True
        return self.full_mask in self.masks

    def canonical_basis(self) -> list[int]:
        """Deterministic independent generating masks (sorted-element greedy)."""
        return gf2.reduce_basis(sorted(self.masks))


def descriptor_from_elements(
    r: int, elements: tuple[SignedBlockPermutation, ...]
) -> RGroupDescriptor:
    order = len(elements)
    d = order.bit_length() - 1
    return RGroupDescriptor(r, tuple(sorted(elements)), d)


def closed_form_R(datum: InducingDatum) -> RGroupDescriptor:
    """Theorem-2.6 construction of R from the index sets and Lambda basis."""
    isets = index_sets(datum)
    r1 = tuple(1 << (i - 1) for i in sorted(isets.i1))
    chi_groups = []
    lam_gens: tuple[int, ...] = ()
    if datum.family in ODD_FAMILIES:
        lam = LambdaFamily((), (), ())
        d = isets.d1
    else:
        lam = lambda_family(datum, isets)
        for chi in sorted(isets.i_chi):
            members = sorted(isets.i_chi[chi])
            anchor = members[0]
            masks = tuple(
                (1 << (anchor - 1)) | (1 << (i - 1)) for i in members[1:]
            )
            chi_groups.append((chi, masks))
        lam_list = []
        for member in lam.basis:
            mask = 0
            for chi in member:
                anchor = min(isets.i_chi[chi])
                mask |= 1 << (anchor - 1)
            lam_list.append(mask)
        lam_gens = tuple(lam_list)
        d = isets.d1 + sum(dc - 1 for dc in isets.d_chi.values()) + lam.rank
    gens = RGenerators(r1, tuple(chi_groups), lam_gens)
    masks = sorted(gf2.span(gens.flat()))
    elements = tuple(
        weyl.SignedBlockPermutation(tuple(range(datum.r)), mask) for mask in masks
    )
    assert len(elements) == 1 << d, "generator count disagrees with d formula"
    return RGroupDescriptor(datum.r, elements, d, gens, isets, lam)


def gu_even_special_case(datum: InducingDatum) -> tuple[int, int, int]:
    """(d1, d2, d) where d2 counts the omega_{E/F}-classes; d collapses to
    d1 when d2 = 0 and to d1 + d2 - 1 otherwise."""
    if datum.family != "GU_even":
        raise FamilyMismatch("special case applies to GU_even only")
    isets = index_sets(datum)
    nontrivial = 1  # the unique nontrivial character at rank 1
    d2 = isets.d_chi.get(nontrivial, 0)
    d = isets.d1 if d2 == 0 else isets.d1 + d2 - 1
    return isets.d1, d2, d
