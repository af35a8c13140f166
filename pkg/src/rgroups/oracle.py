"""Brute-force reference analysis and differential testing.

Everything here recomputes the R-group and its consequences straight from
the definitions over the enumerated Weyl group, then checks the closed-form
route against it: element-set equality, the d formula, the semidirect
decomposition of the stabilizer, the sign-change lemmas, verdict agreement
with the per-family theorem predicates, and the elliptic sign structure.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from . import components, elliptic, gf2, rgroup, weyl
from .datum import (
    CharGroup,
    FactorClass,
    InducingDatum,
    ODD_FAMILIES,
    XRhoSubgroup,
    datum_to_doc,
    twist_matters,
    validate,
)
from .elliptic import EllipticClassification, Verdict
from .errors import CapExceeded
from .rgroup import DeltaPrime, RGroupDescriptor, descriptor_from_elements
from .weyl import SignedBlockPermutation

ORACLE_R_CAP = 7
ORACLE_GAMMA_CAP = 8  # |Gamma| <= 8, i.e. rank <= 3
CATALOG_R_CAP = 4


@dataclass(frozen=True)
class OracleResult:
    w_sigma: tuple[SignedBlockPermutation, ...]
    delta_prime: DeltaPrime
    r_elements: tuple[SignedBlockPermutation, ...]
    w_prime: tuple[SignedBlockPermutation, ...]
    lemma_2_2_ok: bool
    semidirect_ok: bool
    classification: EllipticClassification

    @property
    def descriptor(self) -> RGroupDescriptor:
        return descriptor_from_elements(
            len(self.w_sigma[0].perm) if self.w_sigma else 0, self.r_elements
        )


def _check_caps(datum: InducingDatum, cap: int) -> None:
    if datum.r > cap:
        raise CapExceeded(f"r = {datum.r} exceeds oracle cap {cap}")
    if datum.gamma.order > ORACLE_GAMMA_CAP:
        raise CapExceeded(
            f"|Gamma| = {datum.gamma.order} exceeds cap {ORACLE_GAMMA_CAP}"
        )


def _semidirect_ok(
    datum: InducingDatum,
    w_sigma: Sequence[SignedBlockPermutation],
    delta: DeltaPrime,
    r_elements: Sequence[SignedBlockPermutation],
    w_prime: Sequence[SignedBlockPermutation],
) -> bool:
    if len(w_sigma) != len(r_elements) * len(w_prime):
        return False
    prime_set = set(w_prime)
    if set(r_elements) & prime_set != {weyl.identity(datum.r)}:
        return False
    # Normality of W' in W(sigma): conjugating the reflection through beta
    # by w gives the reflection through w(beta).
    for w in w_sigma:
        for root in delta.sorted():
            image, _ = weyl.act_on_root(w, root)
            if rgroup.reflection(image, datum.r) not in prime_set:
                return False
    return True


def oracle_full_analysis(
    datum: InducingDatum, cap: int = ORACLE_R_CAP
) -> OracleResult:
    """Definitional computation of W(sigma), Delta', R, W' and the verdict."""
    _check_caps(datum, cap)
    r = datum.r
    delta = rgroup.compute_delta_prime(datum)
    w_sigma = rgroup.enumerate_w_sigma(datum, cap)
    r_elements = tuple(
        w
        for w in w_sigma
        if all(weyl.act_on_root(w, root)[1] > 0 for root in delta.roots)
    )
    w_prime = rgroup.generate_subgroup(
        [rgroup.reflection(root, r) for root in delta.sorted()], r
    )
    lemma_2_2_ok = all(w.is_sign_change for w in r_elements)
    semidirect = _semidirect_ok(datum, w_sigma, delta, r_elements, w_prime)
    classification = elliptic.classify(
        datum, descriptor_from_elements(r, r_elements)
    )
    return OracleResult(
        w_sigma, delta, r_elements, w_prime, lemma_2_2_ok, semidirect, classification
    )


# --- the differential battery -------------------------------------------------


@dataclass(frozen=True)
class DifferentialReport:
    passed: bool
    failures: tuple[str, ...]
    w_sigma_order: int
    w_prime_order: int
    r_order: int
    d: int
    verdict: Verdict

    @property
    def first_failure(self) -> Optional[str]:
        return self.failures[0] if self.failures else None


def _elliptic_structure_failures(
    datum: InducingDatum, R: RGroupDescriptor
) -> list[str]:
    """Lemma 3.7/3.8 and Theorem 3.9/1.4 checks for elliptic instances."""
    failures = []
    r, d = datum.r, R.d
    if d == 0:
        return failures
    for i in range(1, r + 1):
        sub_order = components.sub_rgroup(R, frozenset({i})).order
        if 2 * sub_order != R.order:
            failures.append(
                f"lemma_3_7: |R_{{{i}}}| = {sub_order}, expected {R.order // 2}"
            )
    try:
        omega, _certificate = components.adapted_generators(R)
    except AssertionError as exc:
        failures.append(f"lemma_3_8: {exc}")
        return failures
    basis = list(omega)
    chars = components.characters_of_R(R, basis)
    eps = {k: components.epsilon_sign(k, R, basis) for k in chars}
    if sum(eps.values()) != 0:
        failures.append(f"theorem_3_9: sign sum {sum(eps.values())} != 0")
    for k1, k2 in itertools.product(chars, repeat=2):
        if eps[k1.product(k2)] != eps[k1] * eps[k2]:
            failures.append("theorem_3_9: epsilon not multiplicative")
            break
    for i in range(1, r + 1):
        rj = components.sub_rgroup(R, frozenset({i}))
        seen: list[tuple[int, ...]] = []
        fiber_ok = True
        for kp in components.characters_of_R(rj):
            fiber = components.restriction_fibers(R, frozenset({i}), kp, basis)
            if len(fiber) != 2:
                failures.append(
                    f"theorem_1_4: fiber over block {i} has size {len(fiber)}"
                )
                fiber_ok = False
                break
            if eps[fiber[0]] != -eps[fiber[1]]:
                failures.append(
                    f"theorem_3_9: fiber signs over block {i} not opposite"
                )
                fiber_ok = False
                break
            seen.extend(k.signs for k in fiber)
        if not fiber_ok:
            break
        if sorted(seen) != sorted(k.signs for k in chars):
            failures.append(f"theorem_1_4: fibers over block {i} do not partition")
    return failures


def differential_check(
    datum: InducingDatum, cap: int = ORACLE_R_CAP
) -> DifferentialReport:
    """Run every closed-form-vs-definition check on one instance."""
    oracle = oracle_full_analysis(datum, cap)
    closed = rgroup.closed_form_R(datum)
    failures: list[str] = []

    if not oracle.lemma_2_2_ok:
        bad = next(w for w in oracle.r_elements if not w.is_sign_change)
        failures.append(f"lemma_2_2: non-sign-change element {bad} in R")
        return _report(oracle, closed, failures)

    brute = oracle.descriptor
    if set(oracle.r_elements) != set(closed.elements):
        missing = sorted(set(oracle.r_elements) - set(closed.elements))
        extra = sorted(set(closed.elements) - set(oracle.r_elements))
        failures.append(
            f"theorem_2_6: element sets differ (oracle-only {list(map(str, missing))}, "
            f"closed-only {list(map(str, extra))})"
        )
    if 1 << closed.d != brute.order:
        failures.append(
            f"theorem_2_6: d = {closed.d} but |R| = {brute.order}"
        )
    if not oracle.semidirect_ok:
        failures.append(
            f"theorem_1_1: |W(sigma)| = {len(oracle.w_sigma)}, "
            f"|R| = {brute.order}, |W'| = {len(oracle.w_prime)}"
        )

    if datum.family in ODD_FAMILIES:
        masks = brute.masks
        for mask in masks:
            for i in range(datum.r):
                if mask >> i & 1 and (1 << i) not in masks:
                    failures.append(
                        f"lemma_2_5: C_B in R but C_{i + 1} missing (B mask {mask})"
                    )
        if oracle.classification.verdict is Verdict.NOT_INDUCED:
            failures.append("classification: NOT_INDUCED verdict on an odd family")

    isets = closed.index_sets
    single = frozenset(
        i for i in range(1, datum.r + 1) if (1 << (i - 1)) in brute.masks
    )
    if single != isets.i1:
        failures.append(
            f"theorem_2_6a: C_i membership {sorted(single)} != I_1 {sorted(isets.i1)}"
        )

    closed_verdict = elliptic.classify(datum, closed).verdict
    if closed_verdict is not oracle.classification.verdict:
        failures.append(
            f"classification: closed {closed_verdict.value} vs "
            f"oracle {oracle.classification.verdict.value}"
        )

    if datum.family in ("GSp_even", "GO_even"):
        osets = elliptic.o_sets(datum, isets, closed.lam)
        report = elliptic.theorem_3_6_predicates(datum, brute, osets)
        implied = report.implied_verdict
    else:
        report = elliptic.theorem_3_4_predicates(datum, brute)
        implied = report.implied_verdict
    if implied is not None and implied is not oracle.classification.verdict:
        failures.append(
            f"theorem_3_x: implied {implied.value} vs "
            f"verdict {oracle.classification.verdict.value}"
        )

    if datum.family == "GU_even":
        _, _, d_special = rgroup.gu_even_special_case(datum)
        if d_special != closed.d:
            failures.append(
                f"gu_even: remark d = {d_special} vs closed d = {closed.d}"
            )

    fixed_zero = any(
        weyl.fixed_subspace(w).dim == 0 for w in oracle.r_elements
    )
    is_elliptic = oracle.classification.verdict is Verdict.ELLIPTIC
    if datum.r > 0 and (
        fixed_zero != brute.is_elliptic or is_elliptic != brute.is_elliptic
    ):
        failures.append("prop_3_3: three-way ellipticity equivalence failed")

    if is_elliptic:
        failures.extend(_elliptic_structure_failures(datum, brute))

    return _report(oracle, closed, failures)


def _report(
    oracle: OracleResult, closed: RGroupDescriptor, failures: list[str]
) -> DifferentialReport:
    return DifferentialReport(
        not failures,
        tuple(failures),
        len(oracle.w_sigma),
        len(oracle.w_prime),
        len(oracle.r_elements),
        closed.d,
        oracle.classification.verdict,
    )


# --- canonical forms and the exhaustive catalog --------------------------------


def _encode(
    datum: InducingDatum, order: Sequence[int]
) -> tuple:
    """Comparable encoding of the datum with blocks reordered by `order`
    and classes relabelled by first occurrence."""
    labels: dict[str, int] = {}
    blocks = []
    for pos in order:
        label = datum.blocks[pos]
        if label not in labels:
            labels[label] = len(labels)
        blocks.append(labels[label])
    classes = []
    for label, idx in sorted(labels.items(), key=lambda kv: kv[1]):
        cls = datum.classes[label]
        if cls.self_dual:
            partner = idx
        elif cls.eps_dual in labels:
            partner = labels[cls.eps_dual]
        else:
            partner = -1  # phantom dual, never a block class
        omega = -1 if cls.omega is None else cls.omega
        classes.append((cls.size, partner, omega, cls.x_holds))
    sizes = tuple(datum.classes[datum.blocks[pos]].size for pos in order)
    return (sizes, tuple(blocks), tuple(classes))


def canonical_form(datum: InducingDatum) -> InducingDatum:
    """Minimal relabelling of blocks and classes; X(rho) generators are
    normalized to a reduced basis."""
    r = datum.r
    best_order = min(
        itertools.permutations(range(r)), key=lambda order: _encode(datum, order)
    )
    sizes, blocks, classes = _encode(datum, best_order)
    table: dict[str, FactorClass] = {}
    for idx, (size, partner, omega, x_holds) in enumerate(classes):
        label = f"c{idx + 1}"
        omega_val = None if omega < 0 else omega
        if partner == idx:
            table[label] = FactorClass(label, size, label, omega_val, x_holds)
        elif partner < 0:
            table[label] = FactorClass(label, size, label + "d", None, x_holds)
            table[label + "d"] = FactorClass(label + "d", size, label, None, False)
        else:
            table[label] = FactorClass(
                label, size, f"c{partner + 1}", omega_val, x_holds
            )
    gens = tuple(gf2.reduce_basis(sorted(datum.x_rho.members - {0})))
    x_rho = XRhoSubgroup.from_generators(gens)
    return InducingDatum(
        datum.family,
        datum.gamma,
        x_rho,
        datum.m,
        tuple(f"c{idx + 1}" for idx in blocks),
        table,
    )


def _set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted-growth strings: assignment[i] = class index of block i."""
    if n == 0:
        yield ()
        return
    def rec(prefix: list[int], used: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for cls in range(used + 1):
            prefix.append(cls)
            yield from rec(prefix, max(used, cls + 1))
            prefix.pop()
    yield from rec([], 0)


def _duality_structures(k: int) -> Iterator[tuple[tuple, ...]]:
    """Each class becomes ('self',), ('phantom',) or ('pair', partner)."""
    def rec(assigned: dict[int, tuple]) -> Iterator[tuple[tuple, ...]]:
        free = [i for i in range(k) if i not in assigned]
        if not free:
            yield tuple(assigned[i] for i in range(k))
            return
        i = free[0]
        for choice in (("self",), ("phantom",)):
            assigned[i] = choice
            yield from rec(assigned)
            del assigned[i]
        for j in free[1:]:
            assigned[i] = ("pair", j)
            assigned[j] = ("pair", i)
            yield from rec(assigned)
            del assigned[i]
            del assigned[j]
    yield from rec({})


def _subgroups(gamma: CharGroup) -> list[tuple[int, ...]]:
    """All subgroups of Gamma as sorted member tuples."""
    elements = list(gamma.elements())
    found = set()
    for k in range(gamma.rank + 1):
        for gens in itertools.combinations(elements, k):
            found.add(tuple(sorted(gf2.span(gens))))
    return sorted(found)


def _assemble(
    family: str,
    gamma: CharGroup,
    x_rho: XRhoSubgroup,
    assignment: tuple[int, ...],
    duality: tuple[tuple, ...],
    attributes: tuple[tuple[Optional[int], bool], ...],
    m: int,
) -> InducingDatum:
    table: dict[str, FactorClass] = {}
    k = len(duality)
    for idx in range(k):
        label = f"c{idx + 1}"
        omega, x_holds = attributes[idx]
        if duality[idx][0] == "self":
            table[label] = FactorClass(label, 1, label, omega, x_holds)
        elif duality[idx][0] == "phantom":
            table[label] = FactorClass(label, 1, label + "d", None, False)
            table[label + "d"] = FactorClass(label + "d", 1, label, None, False)
        else:
            partner = duality[idx][1]
            table[label] = FactorClass(label, 1, f"c{partner + 1}", None, False)
    blocks = tuple(f"c{cls + 1}" for cls in assignment)
    return InducingDatum(family, gamma, x_rho, m, blocks, table)


def enumerate_instances(
    family: str,
    r: int,
    gamma_rank: int,
    r_cap: int = CATALOG_R_CAP,
) -> list[InducingDatum]:
    """All canonical inducing data for the family at r unit-size blocks.

    Block sizes are fixed to 1 and m to 0: both only shrink the ambient
    Weyl group without touching the sign-change combinatorics, and the
    fuzzer varies them independently.
    """
    if r > r_cap:
        raise CapExceeded(f"r = {r} exceeds catalog cap {r_cap}")
    if gamma_rank > 3:
        raise CapExceeded("gamma_rank exceeds 3")
    odd = family in ODD_FAMILIES
    rank = 1 if family in ("GU_even", "GU_odd") else gamma_rank
    gamma = CharGroup(rank)
    if odd:
        x_rho_options = [XRhoSubgroup.full(gamma)]
    else:
        x_rho_options = [
            XRhoSubgroup(tuple(gf2.reduce_basis(members)), frozenset(members))
            for members in _subgroups(gamma)
        ]
    if r == 0:
        x_rho = x_rho_options[0]
        return [
            InducingDatum(family, gamma, x_rho, 0, (), {})
        ]
    out = []
    seen = set()
    for assignment in _set_partitions(r):
        k = max(assignment) + 1
        for duality in _duality_structures(k):
            for x_rho in x_rho_options:
                per_class_options = []
                for idx in range(k):
                    if duality[idx][0] != "self":
                        per_class_options.append([(None, False)])
                    elif odd:
                        per_class_options.append([(None, False), (None, True)])
                    else:
                        options = []
                        for omega in gamma.elements():
                            options.append((omega, False))
                            if omega in x_rho:
                                options.append((omega, True))
                        per_class_options.append(options)
                for attributes in itertools.product(*per_class_options):
                    datum = _assemble(
                        family, gamma, x_rho, assignment, duality, attributes, 0
                    )
                    assert not validate(datum)
                    canon = canonical_form(datum)
                    key = repr(datum_to_doc(canon))
                    if key not in seen:
                        seen.add(key)
                        out.append(canon)
    return out


# --- seeded fuzzing -------------------------------------------------------------


FUZZ_SIZES = (1, 1, 1, 2, 2, 3)


def random_instance(
    rng: random.Random,
    families: Sequence[str],
    r_min: int,
    r_max: int,
    gamma_rank_max: int,
) -> InducingDatum:
    """One pseudo-random valid instance (Mersenne Twister driven)."""
    family = rng.choice(list(families))
    odd = family in ODD_FAMILIES
    rank = 1 if family in ("GU_even", "GU_odd") else rng.randint(1, gamma_rank_max)
    gamma = CharGroup(rank)
    r = rng.randint(r_min, r_max)
    m = rng.randint(0, 2)
    if odd:
        x_rho = XRhoSubgroup.full(gamma)
    else:
        gens = tuple(
            rng.randrange(gamma.order) for _ in range(rng.randint(0, rank))
        )
        x_rho = XRhoSubgroup.from_generators(gens)
    # Random class pattern: each block either reuses an earlier class or
    # opens a new one.
    assignment = []
    classes_so_far = 0
    for _ in range(r):
        if classes_so_far and rng.random() < 0.3:
            assignment.append(rng.randrange(classes_so_far))
        else:
            assignment.append(classes_so_far)
            classes_so_far += 1
    k = classes_so_far
    sizes = [rng.choice(FUZZ_SIZES) for _ in range(k)]
    duality: dict[int, tuple] = {}
    for idx in range(k):
        if idx in duality:
            continue
        roll = rng.random()
        partners = [
            j for j in range(idx + 1, k) if j not in duality and sizes[j] == sizes[idx]
        ]
        if roll < 0.55:
            duality[idx] = ("self",)
        elif roll < 0.8 or not partners:
            duality[idx] = ("phantom",)
        else:
            j = rng.choice(partners)
            duality[idx] = ("pair", j)
            duality[j] = ("pair", idx)
    table: dict[str, FactorClass] = {}
    blocks = tuple(f"c{idx + 1}" for idx in assignment)
    for idx in range(k):
        label = f"c{idx + 1}"
        size = sizes[idx]
        if duality[idx][0] == "self":
            if odd:
                omega = None
                x_holds = rng.random() < 0.5
            else:
                omega = rng.randrange(gamma.order)
                x_holds = omega in x_rho and rng.random() < 0.5
            table[label] = FactorClass(label, size, label, omega, x_holds)
        elif duality[idx][0] == "phantom":
            table[label] = FactorClass(label, size, label + "d", None, False)
            table[label + "d"] = FactorClass(label + "d", size, label, None, False)
        else:
            partner = duality[idx][1]
            table[label] = FactorClass(label, size, f"c{partner + 1}", None, False)
    datum = InducingDatum(family, gamma, x_rho, m, blocks, table)
    assert not validate(datum)
    return datum


def derived_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


@dataclass(frozen=True)
class FuzzRecord:
    index: int
    doc: dict
    report: DifferentialReport

    def to_json_obj(self) -> dict:
        return {
            "index": self.index,
            "instance": self.doc,
            "w_sigma_order": self.report.w_sigma_order,
            "w_prime_order": self.report.w_prime_order,
            "d": self.report.d,
            "verdict": self.report.verdict.value,
            "pass": self.report.passed,
            "failures": list(self.report.failures),
        }


@dataclass(frozen=True)
class FuzzSummary:
    count: int
    passes: int
    fails: int
    verdict_histogram: tuple[tuple[str, int], ...]
    first_failure: Optional[dict]

    def to_json_obj(self) -> dict:
        return {
            "count": self.count,
            "passes": self.passes,
            "fails": self.fails,
            "verdict_histogram": dict(self.verdict_histogram),
            "first_failure": self.first_failure,
        }


def fuzz_one(
    seed: int,
    index: int,
    families: Sequence[str],
    r_min: int,
    r_max: int,
    gamma_rank_max: int,
) -> FuzzRecord:
    rng = random.Random(derived_seed(seed, index))
    datum = random_instance(rng, families, r_min, r_max, gamma_rank_max)
    report = differential_check(datum)
    return FuzzRecord(index, datum_to_doc(datum), report)


def fuzz(
    families: Sequence[str],
    r_min: int,
    r_max: int,
    gamma_rank_max: int,
    count: int,
    seed: int,
    jobs: int = 1,
) -> tuple[FuzzSummary, list[FuzzRecord]]:
    """Seeded fuzz campaign; same arguments always produce the same records."""
    if count < 1:
        raise ValueError("fuzz count must be at least 1")
    if r_max > ORACLE_R_CAP:
        raise CapExceeded(f"r_max = {r_max} exceeds oracle cap {ORACLE_R_CAP}")
    families = sorted(families)
    if jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(jobs) as pool:
            records = pool.starmap(
                fuzz_one,
                [
                    (seed, i, families, r_min, r_max, gamma_rank_max)
                    for i in range(count)
                ],
                chunksize=max(1, count // (jobs * 8)),
            )
    else:
        records = [
            fuzz_one(seed, i, families, r_min, r_max, gamma_rank_max)
            for i in range(count)
        ]
    records.sort(key=lambda rec: rec.index)
    histogram: dict[str, int] = {}
    passes = 0
    first_failure = None
    for rec in records:
        histogram[rec.report.verdict.value] = (
            histogram.get(rec.report.verdict.value, 0) + 1
        )
        if rec.report.passed:
            passes += 1
        elif first_failure is None:
            first_failure = rec.to_json_obj()
    summary = FuzzSummary(
        count,
        passes,
        count - passes,
        tuple(sorted(histogram.items())),
        first_failure,
    )
    return summary, records
