"""Command-line client behavior and exit-code contract."""

import json

import pytest

from rgroups.cli import (
    EXIT_CAP,
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_OTHER,
    EXIT_VALIDATION,
    main,
)
from rgroups.examples import example_doc


@pytest.fixture()
def ex_a_file(tmp_path):
    path = tmp_path / "EX_A.json"
    path.write_text(json.dumps(example_doc("EX_A")))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_text(ex_a_file, capsys):
    code, out, _ = run(["analyze", ex_a_file], capsys)
    assert code == EXIT_OK
    assert "8 elliptic constituents" in out
    assert "verdict: ELLIPTIC" in out


def test_analyze_json_deterministic(ex_a_file, capsys):
    code, out1, _ = run(["analyze", ex_a_file, "--format", "json"], capsys)
    assert code == EXIT_OK
    code, out2, _ = run(["analyze", ex_a_file, "--format", "json"], capsys)
    assert out1 == out2
    body = json.loads(out1)
    assert body["rgroup"]["d"] == 3


def test_analyze_with_oracle(ex_a_file, capsys):
    code, out, _ = run(["analyze", ex_a_file, "--oracle"], capsys)
    assert code == EXIT_OK
    assert "oracle: PASS" in out


def test_analyze_validation_exit(tmp_path, capsys):
    doc = example_doc("EX_A")
    doc["classes"]["c1"]["omega"] = "10"
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(["analyze", str(path)], capsys)
    assert code == EXIT_VALIDATION
    assert "x_holds requires omega in X(rho)" in err


def test_analyze_malformed_json_exit(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{oops")
    code, _, _ = run(["analyze", str(path)], capsys)
    assert code == EXIT_VALIDATION


def test_analyze_missing_file_exit(capsys):
    code, _, _ = run(["analyze", "/nonexistent/instance.json"], capsys)
    assert code == EXIT_OTHER


def test_example_reports(capsys):
    for name, needle in (
        ("EX_A", "8 elliptic constituents"),
        ("EX_B", "4 elliptic constituents"),
        ("EX_C", "2 elliptic constituents"),
    ):
        code, out, _ = run(["example", name], capsys)
        assert code == EXIT_OK
        assert needle in out


def test_example_gu3_verdict(capsys):
    code, out, _ = run(["example", "EX_GU3"], capsys)
    assert code == EXIT_OK
    assert "NOT_INDUCED" in out


def test_example_dump_parses(capsys):
    code, out, _ = run(["example", "EX_B", "--dump"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["family"] == "GSp_even"


def test_verify_pass(ex_a_file, capsys):
    code, out, _ = run(["verify", ex_a_file], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["passed"] is True


def test_fuzz_writes_records(tmp_path, capsys):
    out_path = tmp_path / "records.jsonl"
    code, out, _ = run(
        ["fuzz", "--count", "10", "--seed", "6", "--max-r", "3", "--out", str(out_path)],
        capsys,
    )
    assert code == EXIT_OK
    lines = out_path.read_text().splitlines()
    assert len(lines) == 10
    record = json.loads(lines[0])
    assert set(record) >= {"instance", "w_sigma_order", "w_prime_order", "d", "verdict", "pass"}
    summary = json.loads(out)
    assert summary["fails"] == 0


def test_fuzz_byte_identical(tmp_path, capsys):
    args = ["fuzz", "--count", "8", "--seed", "13", "--max-r", "3"]
    code, out1, _ = run(args, capsys)
    assert code == EXIT_OK
    _, out2, _ = run(args, capsys)
    assert out1 == out2


def test_fuzz_count_zero_exit(capsys):
    code, _, _ = run(["fuzz", "--count", "0"], capsys)
    assert code == EXIT_OTHER


def test_fuzz_cap_exit(capsys):
    code, _, _ = run(["fuzz", "--count", "1", "--max-r", "9"], capsys)
    assert code == EXIT_CAP


def test_catalog_golden_count(tmp_path, capsys):
    out_path = tmp_path / "cat.jsonl"
    code, out, _ = run(
        ["catalog", "--family", "GO_odd", "--r", "2", "--gamma-rank", "1", "--out", str(out_path)],
        capsys,
    )
    assert code == EXIT_OK
    assert json.loads(out) == {"count": 10, "fails": 0}
    assert len(out_path.read_text().splitlines()) == 10


def test_catalog_cap_exit(capsys):
    code, _, _ = run(["catalog", "--family", "GO_odd", "--r", "6"], capsys)
    assert code == EXIT_CAP


def test_unknown_example_exit(capsys):
    with pytest.raises(SystemExit):
        main(["example", "EX_NOPE"])  # argparse rejects the choice
