"""Abstract inducing data for similitude groups.

An instance records everything the block-level combinatorics needs about a
discrete series sigma = sigma_1 x ... x sigma_r x rho of a Levi subgroup
GL_{m_1} x ... x GL_{m_r} x G(m): the group family, the finite character
group Gamma of the base field modulo eps-norms, the stabilizer X(rho) of rho
inside Gamma, and for each GL factor its equivalence class, eps-dual class,
central character (when it lives in Gamma) and rank-one reducibility flag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import gf2
from .errors import IndexOutOfRange, InstanceSyntaxError, SchemaError, ValidationError

FAMILIES = ("GSp_even", "GO_even", "GO_odd", "GU_even", "GU_odd")

ODD_FAMILIES = ("GO_odd", "GU_odd")
GU_FAMILIES = ("GU_even", "GU_odd")

MAX_GAMMA_RANK = 3


def twist_matters(family: str) -> bool:
    """Whether the central-character twist of rho is a real condition.

    The similitude factor of G(m) exhausts the base field exactly for the
    even families, so only there can a sign change twist rho nontrivially.
    """
    return family in ("GSp_even", "GO_even", "GU_even")


@dataclass(frozen=True)
class CharGroup:
    """Elementary 2-group of characters, elements encoded as int bitmasks.

    An element's bitstring form is most-significant coordinate first, so
    mask 0b10 prints as "10" at rank 2.
    """

    rank: int

    @property
    def order(self) -> int:
        return 1 << self.rank

    def elements(self) -> range:
        return range(self.order)

    def to_bits(self, value: int) -> str:
        if self.rank == 0:
            return ""
        return format(value, f"0{self.rank}b")

    def parse_bits(self, text: str) -> int:
        if len(text) != self.rank or any(c not in "01" for c in text):
            raise SchemaError(
                f"bitstring {text!r} is not a length-{self.rank} 0/1 string"
            )
        return int(text, 2) if text else 0


@dataclass(frozen=True)
class XRhoSubgroup:
    """Subgroup of Gamma fixing rho under twisting, stored as its full span."""

    generators: tuple[int, ...]
    members: frozenset[int]

    @staticmethod
    def from_generators(generators: tuple[int, ...]) -> "XRhoSubgroup":
        return XRhoSubgroup(generators, gf2.span(generators))

    @staticmethod
    def full(gamma: CharGroup) -> "XRhoSubgroup":
        gens = tuple(1 << i for i in range(gamma.rank))
        return XRhoSubgroup(gens, gf2.span(gens))

    def __contains__(self, value: int) -> bool:
        return value in self.members


@dataclass(frozen=True)
class FactorClass:
    """Equivalence class of a GL block of the inducing representation."""

    label: str
    size: int
    eps_dual: str
    omega: Optional[int]
    x_holds: bool

    @property
    def self_dual(self) -> bool:
        return self.eps_dual == self.label


@dataclass(frozen=True)
class InducingDatum:
    """A validated abstract inducing datum (M, sigma)."""

    family: str
    gamma: CharGroup
    x_rho: XRhoSubgroup
    m: int
    blocks: tuple[str, ...]
    classes: Mapping[str, FactorClass] = field(hash=False)

    @property
    def r(self) -> int:
        return len(self.blocks)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(self.classes[label].size for label in self.blocks)

    def block_class(self, i: int) -> FactorClass:
        """Class of 1-based block i."""
        if not 1 <= i <= self.r:
            raise IndexOutOfRange(f"block index {i} outside 1..{self.r}")
        return self.classes[self.blocks[i - 1]]

    def dual_label(self, label: str) -> str:
        return self.classes[label].eps_dual


def equivalent(datum: InducingDatum, i: int, j: int) -> bool:
    """sigma_i equivalent to sigma_j, i.e. same class label."""
    return datum.block_class(i).label == datum.block_class(j).label


def eps_dual_equivalent(datum: InducingDatum, i: int, j: int) -> bool:
    """sigma_i equivalent to the eps-dual of sigma_j."""
    return datum.block_class(i).label == datum.block_class(j).eps_dual


# --- instance document handling -------------------------------------------

_TOP_KEYS = {"family", "gamma_rank", "m", "blocks", "classes", "x_rho_generators"}
_CLASS_KEYS = {"size", "eps_dual", "omega", "x_holds"}
_BLOCK_KEYS = {"size", "class"}


def _require_keys(obj: dict, keys: set, where: str) -> None:
    missing = keys - obj.keys()
    extra = obj.keys() - keys
    if missing:
        raise SchemaError(f"{where}: missing fields {sorted(missing)}")
    if extra:
        raise SchemaError(f"{where}: unexpected fields {sorted(extra)}")


def _require_type(value, types, where: str):
    if not isinstance(value, types) or isinstance(value, bool) and types is int:
        raise SchemaError(f"{where}: expected {types}, got {type(value).__name__}")
    return value


def build_datum(doc: dict) -> InducingDatum:
    """Build a datum from a decoded document, checking only structure.

    Invariant violations are left for validate(); forced normalizations for
    the odd families (X(rho) = Gamma, omegas dropped) happen here.
    """
    if not isinstance(doc, dict):
        raise SchemaError("instance document must be a JSON object")
    _require_keys(doc, _TOP_KEYS, "instance")
    family = _require_type(doc["family"], str, "family")
    if family not in FAMILIES:
        raise SchemaError(f"family: unknown family {family!r}")
    rank = _require_type(doc["gamma_rank"], int, "gamma_rank")
    if not 0 <= rank <= MAX_GAMMA_RANK:
        raise SchemaError(f"gamma_rank: must be between 0 and {MAX_GAMMA_RANK}")
    gamma = CharGroup(rank)
    m = _require_type(doc["m"], int, "m")
    if m < 0:
        raise SchemaError("m: must be nonnegative")

    odd = family in ODD_FAMILIES
    classes: dict[str, FactorClass] = {}
    raw_classes = _require_type(doc["classes"], dict, "classes")
    for label, raw in sorted(raw_classes.items()):
        _require_type(raw, dict, f"classes[{label}]")
        _require_keys(raw, _CLASS_KEYS, f"classes[{label}]")
        size = _require_type(raw["size"], int, f"classes[{label}].size")
        if size < 1:
            raise SchemaError(f"classes[{label}].size: must be positive")
        dual = _require_type(raw["eps_dual"], str, f"classes[{label}].eps_dual")
        omega = raw["omega"]
        if omega is not None:
            omega = gamma.parse_bits(
                _require_type(omega, str, f"classes[{label}].omega")
            )
        if odd:
            omega = None  # central-character twists are vacuous here
        x_holds = raw["x_holds"]
        if not isinstance(x_holds, bool):
            raise SchemaError(f"classes[{label}].x_holds: expected bool")
        classes[label] = FactorClass(label, size, dual, omega, x_holds)

    blocks: list[str] = []
    raw_blocks = _require_type(doc["blocks"], list, "blocks")
    for pos, raw in enumerate(raw_blocks, start=1):
        _require_type(raw, dict, f"blocks[{pos}]")
        _require_keys(raw, _BLOCK_KEYS, f"blocks[{pos}]")
        label = _require_type(raw["class"], str, f"blocks[{pos}].class")
        size = _require_type(raw["size"], int, f"blocks[{pos}].size")
        if label not in classes:
            raise SchemaError(f"blocks[{pos}]: unknown class {label!r}")
        if size != classes[label].size:
            raise SchemaError(
                f"blocks[{pos}]: size {size} != class {label!r} size "
                f"{classes[label].size}"
            )
        blocks.append(label)

    raw_gens = _require_type(doc["x_rho_generators"], list, "x_rho_generators")
    gens = tuple(
        gamma.parse_bits(_require_type(g, str, "x_rho_generators[]"))
        for g in raw_gens
    )
    if odd:
        x_rho = XRhoSubgroup.full(gamma)
    else:
        x_rho = XRhoSubgroup.from_generators(gens)

    return InducingDatum(family, gamma, x_rho, m, tuple(blocks), classes)


def validate(datum: InducingDatum) -> list[str]:
    """Return the list of violated invariants (empty means valid)."""
    violations: list[str] = []
    fam = datum.family
    if fam in GU_FAMILIES and datum.gamma.rank != 1:
        violations.append("GU character group has rank 1")
    for label in sorted(datum.classes):
        cls = datum.classes[label]
        dual = datum.classes.get(cls.eps_dual)
        if dual is None:
            violations.append(f"class {label}: eps_dual {cls.eps_dual!r} undefined")
            continue
        if dual.eps_dual != label:
            violations.append(f"class {label}: eps_dual not an involution")
        if dual.size != cls.size:
            violations.append(f"class {label}: eps_dual size")
        if cls.x_holds and not cls.self_dual:
            violations.append(f"class {label}: x_holds requires eps_dual = self")
        if twist_matters(fam):
            if cls.self_dual and cls.omega is None:
                violations.append(f"class {label}: self-dual class needs omega")
            if not cls.self_dual and cls.omega is not None:
                violations.append(f"class {label}: omega on non-self-dual class")
            if cls.x_holds and cls.omega is not None and cls.omega not in datum.x_rho:
                violations.append(f"class {label}: x_holds requires omega in X(rho)")
        else:
            if cls.omega is not None:
                violations.append(f"class {label}: omega must be absent")
    if fam in ODD_FAMILIES and datum.x_rho.members != frozenset(
        datum.gamma.elements()
    ):
        violations.append("odd family requires X(rho) = full character group")
    for gen in datum.x_rho.generators:
        if not 0 <= gen < datum.gamma.order:
            violations.append("X(rho) generator outside character group")
    return violations


def parse_instance(text: str) -> InducingDatum:
    """Parse and validate a JSON instance document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(f"malformed JSON: {exc}") from exc
    datum = build_datum(doc)
    violations = validate(datum)
    if violations:
        raise ValidationError(violations)
    return datum


def datum_to_doc(datum: InducingDatum) -> dict:
    """Serialize a datum back to its document form (stable key order)."""
    return {
        "family": datum.family,
        "gamma_rank": datum.gamma.rank,
        "m": datum.m,
        "blocks": [
            {"size": datum.classes[label].size, "class": label}
            for label in datum.blocks
        ],
        "classes": {
            label: {
                "size": cls.size,
                "eps_dual": cls.eps_dual,
                "omega": None if cls.omega is None else datum.gamma.to_bits(cls.omega),
                "x_holds": cls.x_holds,
            }
            for label, cls in sorted(datum.classes.items())
        },
        "x_rho_generators": [
            datum.gamma.to_bits(g) for g in datum.x_rho.generators
        ],
    }


def serialize_instance(datum: InducingDatum) -> str:
    return json.dumps(datum_to_doc(datum), indent=2) + "\n"
