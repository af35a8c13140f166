"""Request/response models and the analysis orchestration.

The FastAPI app and the command-line client both call into this layer, so
reports are identical whichever surface produced them.  All response JSON
is stable-keyed and deterministic for a given instance and flag set.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from . import components, elliptic, oracle, rgroup, weyl
from .datum import InducingDatum, build_datum, datum_to_doc, validate
from .errors import ValidationError
from .examples import EXAMPLE_NAMES, example_datum, example_doc


class BlockModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)
    size: int
    cls: str = Field(alias="class")


class ClassModel(BaseModel):
    size: int
    eps_dual: str
    omega: Optional[str] = None
    x_holds: bool


class InstanceModel(BaseModel):
    family: str
    gamma_rank: int
    m: int
    blocks: List[BlockModel]
    classes: Dict[str, ClassModel]
    x_rho_generators: List[str]

    def to_doc(self) -> dict:
        return self.model_dump(by_alias=True)

    @staticmethod
    def from_doc(doc: dict) -> "InstanceModel":
        return InstanceModel.model_validate(doc)

    def to_datum(self) -> InducingDatum:
        datum = build_datum(self.to_doc())
        violations = validate(datum)
        if violations:
            raise ValidationError(violations)
        return datum


class RGroupModel(BaseModel):
    order: int
    d: int
    d1: int
    chi_terms: Dict[str, int]
    lambda_rank: int
    generators: Dict[str, List[str]]
    elements: List[str]
    support: List[int]


class ClassificationModel(BaseModel):
    verdict: str
    support: List[int]
    a_R_dim: int
    w0: Optional[str] = None
    c_support: Optional[str] = None


class ComponentRowModel(BaseModel):
    kappa: str
    epsilon: Optional[int] = None
    multiplicity: int = 1


class ComponentsModel(BaseModel):
    count: int
    elliptic: bool
    w0: Optional[str] = None
    generator_list: List[str]
    rows: List[ComponentRowModel]
    epsilon_sum: Optional[int] = None


class OracleModel(BaseModel):
    passed: bool
    failures: List[str]
    w_sigma_order: int
    w_prime_order: int
    r_order: int
    verdict: str


class AnalysisReportModel(BaseModel):
    instance: InstanceModel
    weyl_order: int
    delta_prime: List[str]
    w_sigma_order: Optional[int] = None
    w_prime_order: Optional[int] = None
    rgroup: RGroupModel
    classification: ClassificationModel
    components: ComponentsModel
    oracle: Optional[OracleModel] = None


class VerifyResponse(BaseModel):
    passed: bool
    failures: List[str]
    w_sigma_order: int
    w_prime_order: int
    r_order: int
    d: int
    verdict: str


class FuzzRequest(BaseModel):
    families: List[str] = Field(default_factory=lambda: list(oracle_families()))
    r_min: int = 1
    r_max: int = 5
    gamma_rank_max: int = 2
    count: int = 100
    seed: int = 0
    jobs: int = 1


class FuzzRecordModel(BaseModel):
    index: int
    instance: InstanceModel
    w_sigma_order: int
    w_prime_order: int
    d: int
    verdict: str
    passed: bool = Field(alias="pass")
    failures: List[str]
    model_config = ConfigDict(populate_by_name=True)


class FuzzResponse(BaseModel):
    summary: dict
    records: List[FuzzRecordModel]


class CatalogRequest(BaseModel):
    family: str
    r: int
    gamma_rank: int = 2


class CatalogResponse(BaseModel):
    count: int
    records: List[FuzzRecordModel]


def oracle_families() -> tuple[str, ...]:
    from .datum import FAMILIES

    return FAMILIES


def _gamma_bits(datum: InducingDatum, value: int) -> str:
    text = datum.gamma.to_bits(value)
    return text if text else "1"


def analyze(datum: InducingDatum, with_oracle: bool = False) -> AnalysisReportModel:
    """Full analysis report for one instance."""
    closed = rgroup.closed_form_R(datum)
    isets = closed.index_sets
    lam = closed.lam
    classification = elliptic.classify(datum, closed)
    table = components.component_table(datum, closed)

    delta = rgroup.compute_delta_prime(datum)
    w_sigma_order = None
    w_prime_order = None
    oracle_model = None
    if datum.r <= oracle.ORACLE_R_CAP:
        w_prime_order = len(rgroup.compute_w_prime(datum, delta))
        if with_oracle:
            report = oracle.differential_check(datum)
            w_sigma_order = report.w_sigma_order
            oracle_model = OracleModel(
                passed=report.passed,
                failures=list(report.failures),
                w_sigma_order=report.w_sigma_order,
                w_prime_order=report.w_prime_order,
                r_order=report.r_order,
                verdict=report.verdict.value,
            )
        else:
            w_sigma_order = closed.order * w_prime_order

    gens = closed.generators
    generators = {
        "r1": [str(weyl.SignedBlockPermutation(tuple(range(datum.r)), m)) for m in gens.r1],
        "chi": [
            f"{_gamma_bits(datum, chi)}: "
            + str(weyl.SignedBlockPermutation(tuple(range(datum.r)), m))
            for chi, masks in gens.chi
            for m in masks
        ],
        "lambda": [
            str(weyl.SignedBlockPermutation(tuple(range(datum.r)), m))
            for m in gens.lam
        ],
    }
    rgroup_model = RGroupModel(
        order=closed.order,
        d=closed.d,
        d1=isets.d1,
        chi_terms={
            _gamma_bits(datum, chi): d - 1 for chi, d in sorted(isets.d_chi.items())
        },
        lambda_rank=lam.rank,
        generators=generators,
        elements=[str(w) for w in closed.elements],
        support=sorted(closed.support),
    )
    classification_model = ClassificationModel(
        verdict=classification.verdict.value,
        support=sorted(classification.support),
        a_R_dim=classification.a_R_dim,
        w0=str(classification.w0) if classification.w0 is not None else None,
        c_support=(
            str(classification.c_support)
            if classification.c_support is not None
            else None
        ),
    )
    components_model = ComponentsModel(
        count=table.count,
        elliptic=closed.is_elliptic,
        w0=str(table.w0) if table.w0 is not None else None,
        generator_list=[
            str(weyl.SignedBlockPermutation(tuple(range(datum.r)), m))
            for m in table.basis
        ],
        rows=[
            ComponentRowModel(
                kappa=row.kappa.name, epsilon=row.epsilon, multiplicity=row.multiplicity
            )
            for row in table.rows
        ],
        epsilon_sum=table.epsilon_sum,
    )
    return AnalysisReportModel(
        instance=InstanceModel.from_doc(datum_to_doc(datum)),
        weyl_order=weyl.weyl_order(datum),
        delta_prime=[str(root) for root in delta.sorted()],
        w_sigma_order=w_sigma_order,
        w_prime_order=w_prime_order,
        rgroup=rgroup_model,
        classification=classification_model,
        components=components_model,
        oracle=oracle_model,
    )


def render_text(report: AnalysisReportModel) -> str:
    """Human-readable report mirroring the classical notation."""
    lines = []
    inst = report.instance
    lines.append(
        f"instance: {inst.family}  r={len(inst.blocks)}  m={inst.m}  "
        f"gamma_rank={inst.gamma_rank}"
    )
    blocks = "  ".join(
        f"{i + 1}:{b.cls}(size {b.size})" for i, b in enumerate(inst.blocks)
    )
    lines.append(f"blocks: {blocks}" if blocks else "blocks: (none, M = G)")
    lines.append(f"|W(G,A)| = {report.weyl_order}")
    delta = ", ".join(report.delta_prime) if report.delta_prime else "{}"
    lines.append(f"Delta' = {delta}")
    if report.w_sigma_order is not None:
        lines.append(
            f"|W(sigma)| = {report.w_sigma_order}   |W'| = {report.w_prime_order}"
        )
    rg = report.rgroup
    chi_sum = sum(rg.chi_terms.values())
    lines.append(
        f"R-group: order {rg.order}, d = {rg.d}  "
        f"[d_1 = {rg.d1}; sum(d_chi - 1) = {chi_sum}; |Lambda'| = {rg.lambda_rank}]"
    )
    gen_bits = []
    if rg.generators["r1"]:
        gen_bits.append("R_1: " + ", ".join(rg.generators["r1"]))
    if rg.generators["chi"]:
        gen_bits.append("R_chi: " + ", ".join(rg.generators["chi"]))
    if rg.generators["lambda"]:
        gen_bits.append("R': " + ", ".join(rg.generators["lambda"]))
    lines.append("generators: " + ("  |  ".join(gen_bits) if gen_bits else "(trivial)"))
    cls = report.classification
    witness = ""
    if cls.w0 is not None:
        witness = f"  (w0 = {cls.w0} in R)"
    elif cls.c_support is not None:
        witness = f"  (C_support = {cls.c_support} in R)"
    lines.append(
        f"verdict: {cls.verdict}{witness}  [support {cls.support}, "
        f"dim a_R = {cls.a_R_dim}]"
    )
    comp = report.components
    noun = "constituent" if comp.count == 1 else "constituents"
    if comp.elliptic:
        lines.append(f"components: {comp.count} elliptic {noun}")
    else:
        lines.append(f"components: {comp.count} {noun} (none elliptic)")
    if comp.generator_list:
        lines.append("  kappa over Omega = [" + ", ".join(comp.generator_list) + "]")
    for row in comp.rows:
        eps = "n/a" if row.epsilon is None else f"{row.epsilon:+d}"
        lines.append(f"  kappa={row.kappa}: epsilon = {eps}")
    if comp.epsilon_sum is not None:
        lines.append(f"  sum epsilon = {comp.epsilon_sum}")
    if report.oracle is not None:
        orc = report.oracle
        status = "PASS" if orc.passed else "FAIL"
        lines.append(
            f"oracle: {status}  |W(sigma)| = {orc.w_sigma_order}, "
            f"|W'| = {orc.w_prime_order}, |R| = {orc.r_order}, "
            f"verdict {orc.verdict}"
        )
        for failure in orc.failures:
            lines.append(f"  divergence: {failure}")
    return "\n".join(lines) + "\n"


def verify(datum: InducingDatum) -> VerifyResponse:
    report = oracle.differential_check(datum)
    return VerifyResponse(
        passed=report.passed,
        failures=list(report.failures),
        w_sigma_order=report.w_sigma_order,
        w_prime_order=report.w_prime_order,
        r_order=report.r_order,
        d=report.d,
        verdict=report.verdict.value,
    )


def _record_model(rec: oracle.FuzzRecord) -> FuzzRecordModel:
    obj = rec.to_json_obj()
    return FuzzRecordModel(
        index=obj["index"],
        instance=InstanceModel.from_doc(obj["instance"]),
        w_sigma_order=obj["w_sigma_order"],
        w_prime_order=obj["w_prime_order"],
        d=obj["d"],
        verdict=obj["verdict"],
        passed=obj["pass"],
        failures=obj["failures"],
    )


def fuzz_run(request: FuzzRequest) -> FuzzResponse:
    summary, records = oracle.fuzz(
        request.families,
        request.r_min,
        request.r_max,
        request.gamma_rank_max,
        request.count,
        request.seed,
        request.jobs,
    )
    return FuzzResponse(
        summary=summary.to_json_obj(),
        records=[_record_model(rec) for rec in records],
    )


def catalog_run(request: CatalogRequest) -> CatalogResponse:
    instances = oracle.enumerate_instances(request.family, request.r, request.gamma_rank)
    records = []
    for index, datum in enumerate(instances):
        report = oracle.differential_check(datum)
        records.append(
            _record_model(
                oracle.FuzzRecord(index, datum_to_doc(datum), report)
            )
        )
    return CatalogResponse(count=len(records), records=records)


def example_report(name: str, with_oracle: bool = False) -> AnalysisReportModel:
    return analyze(example_datum(name), with_oracle)


def example_names() -> tuple[str, ...]:
    return EXAMPLE_NAMES


def example_instance(name: str) -> InstanceModel:
    return InstanceModel.from_doc(example_doc(name))
