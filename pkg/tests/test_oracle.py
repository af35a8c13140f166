"""Brute-force analysis, differential checking, cataloging, and fuzzing."""

import json
import random

import pytest

from conftest import make_datum
from rgroups.datum import datum_to_doc, parse_instance, serialize_instance, validate
from rgroups.elliptic import Verdict
from rgroups.errors import CapExceeded
from rgroups.oracle import (
    canonical_form,
    differential_check,
    enumerate_instances,
    fuzz,
    fuzz_one,
    oracle_full_analysis,
    random_instance,
)

ALL_FAMILIES = ("GSp_even", "GO_even", "GO_odd", "GU_even", "GU_odd")


def test_oracle_ex_a(ex_a):
    result = oracle_full_analysis(ex_a)
    assert len(result.w_sigma) == 8
    assert len(result.w_prime) == 1
    assert len(result.r_elements) == 8
    assert result.semidirect_ok
    assert result.classification.verdict is Verdict.ELLIPTIC


def test_oracle_ex_c(ex_c):
    result = oracle_full_analysis(ex_c)
    assert len(result.w_sigma) == 2
    assert len(result.r_elements) == 2
    assert result.classification.verdict is Verdict.ELLIPTIC


def test_oracle_twin_blocks(twin_blocks_irreducible):
    result = oracle_full_analysis(twin_blocks_irreducible)
    assert len(result.w_sigma) == 8
    assert len(result.r_elements) == 1
    assert len(result.w_prime) == 8


def test_oracle_r_subset_w_sigma(ex_b):
    result = oracle_full_analysis(ex_b)
    assert set(result.r_elements) <= set(result.w_sigma)
    assert set(result.w_prime) <= set(result.w_sigma)


def test_oracle_cap():
    datum = make_datum(
        blocks=[(1, "c1")] * 8, classes=[("c1", 1, "c1", "00", False)]
    )
    with pytest.raises(CapExceeded):
        oracle_full_analysis(datum)


def test_differential_examples_pass(ex_a, ex_b, ex_c, ex_gu3, ex_odd):
    for datum in (ex_a, ex_b, ex_c, ex_gu3, ex_odd):
        report = differential_check(datum)
        assert report.passed, report.failures


def test_differential_gu3_not_induced(ex_gu3):
    report = differential_check(ex_gu3)
    assert report.passed
    assert report.verdict is Verdict.NOT_INDUCED


def test_differential_r_zero():
    datum = make_datum(blocks=[], classes=[])
    report = differential_check(datum)
    assert report.passed
    assert report.r_order == 1
    assert report.verdict is Verdict.ELLIPTIC


# --- catalog enumeration ---------------------------------------------------------


def test_enumerate_go_odd_r1():
    instances = enumerate_instances("GO_odd", 1, 1)
    assert len(instances) == 3
    duals = sorted(
        (d.block_class(1).self_dual, d.block_class(1).x_holds) for d in instances
    )
    assert duals == [(False, False), (True, False), (True, True)]


def test_enumerate_r0_single_instance():
    for family in ALL_FAMILIES:
        assert len(enumerate_instances(family, 0, 2)) == 1


def test_enumerate_all_validate():
    for family in ALL_FAMILIES:
        for datum in enumerate_instances(family, 2, 2):
            assert validate(datum) == []


def test_enumerate_counts_stable():
    # golden counts guard against silent enumeration drift
    counts = {
        family: [len(enumerate_instances(family, r, 2)) for r in range(3)]
        for family in ALL_FAMILIES
    }
    assert counts == {
        "GSp_even": [1, 36, 191],
        "GO_even": [1, 36, 191],
        "GO_odd": [1, 3, 10],
        "GU_even": [1, 9, 36],
        "GU_odd": [1, 3, 10],
    }


def test_enumerate_deduplicates():
    instances = enumerate_instances("GO_odd", 2, 1)
    keys = {repr(datum_to_doc(d)) for d in instances}
    assert len(keys) == len(instances)


def test_enumerate_cap():
    with pytest.raises(CapExceeded):
        enumerate_instances("GO_odd", 5, 1)


def test_canonical_idempotent():
    rng = random.Random(17)
    for _ in range(60):
        datum = random_instance(rng, ALL_FAMILIES, 1, 4, 2)
        canon = canonical_form(datum)
        assert canonical_form(canon) == canon


def test_canonical_preserves_analysis():
    """Canonicalization relabels blocks, so orders and verdicts survive."""
    rng = random.Random(23)
    for _ in range(30):
        datum = random_instance(rng, ALL_FAMILIES, 1, 4, 2)
        canon = canonical_form(datum)
        a, b = oracle_full_analysis(datum), oracle_full_analysis(canon)
        assert len(a.r_elements) == len(b.r_elements)
        assert len(a.w_sigma) == len(b.w_sigma)
        assert a.classification.verdict == b.classification.verdict


# --- fuzzing ----------------------------------------------------------------------


def test_random_instances_valid():
    rng = random.Random(3)
    for _ in range(200):
        datum = random_instance(rng, ALL_FAMILIES, 1, 5, 3)
        assert validate(datum) == []
        assert 1 <= datum.r <= 5


def test_fuzz_deterministic():
    summary1, records1 = fuzz(ALL_FAMILIES, 1, 4, 2, 50, seed=11)
    summary2, records2 = fuzz(ALL_FAMILIES, 1, 4, 2, 50, seed=11)
    as_json1 = json.dumps([r.to_json_obj() for r in records1], sort_keys=True)
    as_json2 = json.dumps([r.to_json_obj() for r in records2], sort_keys=True)
    assert as_json1 == as_json2
    assert summary1.to_json_obj() == summary2.to_json_obj()


def test_fuzz_different_seeds_differ():
    _, records1 = fuzz(ALL_FAMILIES, 1, 4, 2, 20, seed=1)
    _, records2 = fuzz(ALL_FAMILIES, 1, 4, 2, 20, seed=2)
    docs1 = [r.doc for r in records1]
    docs2 = [r.doc for r in records2]
    assert docs1 != docs2


def test_fuzz_all_pass_small_campaign():
    summary, records = fuzz(ALL_FAMILIES, 1, 5, 2, 150, seed=321)
    assert summary.fails == 0
    assert summary.passes == 150
    assert sum(dict(summary.verdict_histogram).values()) == 150


def test_fuzz_count_zero_rejected():
    with pytest.raises(ValueError):
        fuzz(ALL_FAMILIES, 1, 4, 2, 0, seed=1)


def test_fuzz_r_cap():
    with pytest.raises(CapExceeded):
        fuzz(ALL_FAMILIES, 1, 9, 2, 5, seed=1)


def test_fuzz_one_matches_campaign():
    summary, records = fuzz(ALL_FAMILIES, 1, 4, 2, 5, seed=77)
    solo = fuzz_one(77, 3, sorted(ALL_FAMILIES), 1, 4, 2)
    assert solo.to_json_obj() == records[3].to_json_obj()


def test_fuzz_instance_roundtrip():
    _, records = fuzz(ALL_FAMILIES, 1, 4, 2, 10, seed=5)
    for rec in records:
        datum = parse_instance(json.dumps(rec.doc))
        assert datum_to_doc(datum) == rec.doc
        assert serialize_instance(datum)


def test_verdict_histogram_no_odd_not_induced():
    summary, records = fuzz(("GO_odd", "GU_odd"), 1, 5, 2, 120, seed=9)
    histogram = dict(summary.verdict_histogram)
    assert summary.fails == 0
    assert "NOT_INDUCED" not in histogram
    assert "INDUCED_FROM_TEMPERED_ONLY" not in histogram
