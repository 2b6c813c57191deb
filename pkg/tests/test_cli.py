"""End-to-End-Tests der Kommandozeile über rmod.main(argv)."""

import json
import time

import pytest

import rmod
from config.settings import VERSION
from tests.conftest import GOLDEN_REPORT, SAMPLE_DATASETS, SAMPLE_WORKSPACE

WS = str(SAMPLE_WORKSPACE)
DATA = str(SAMPLE_DATASETS)


def run(capsys, *argv):
    code = rmod.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        rmod.main(["--version"])
    assert info.value.code == 0
    assert capsys.readouterr().out.strip() == f"rmod {VERSION}"


def test_info_abstract_module(capsys):
    code, out, _ = run(capsys, "info", WS, "--module", "LoanApps")

    assert code == 0
    assert "abstract: yes" in out
    assert "undefined predicates: sValue/2, securities/2, security/1" in out
    assert "parent: -" in out


def test_info_concrete_module(capsys):
    code, out, _ = run(capsys, "info", WS, "--module", "PrivateLoanApps")

    assert code == 0
    assert "abstract: no" in out
    assert "parent: LoanApps" in out


def test_resolve_prints_standalone_module(capsys):
    code, out, _ = run(capsys, "resolve", WS, "--module", "MortgageApps")

    assert code == 0
    assert out.startswith("module MortgageApps {")
    assert "add R1.1:" in out
    assert "add R1:" not in out


def test_run_facts(capsys):
    code, out, _ = run(capsys, "run", WS, "--module", "MortgageApps", "--data", "two_applications")

    assert code == 0
    lines = out.splitlines()
    assert "cwGood(l1)." in lines
    assert "cwBad(l2)." in lines
    assert "lowPropValue(l2, p2)." in lines


def test_run_json_with_data_file(capsys):
    path = str(SAMPLE_DATASETS / "two_applications.facts")
    code, out, _ = run(capsys, "run", WS, "--module", "PrivateLoanApps", "--data", path, "--format", "json")

    payload = json.loads(out)
    assert code == 0
    assert payload["outputs"]["incomes/2"] == [["l1", 288000], ["l2", 4320]]
    assert payload["outputs"]["lowIncome/2"] == []


def test_run_abstract_module_needs_flag(capsys):
    code, _, err = run(capsys, "run", WS, "--module", "LoanApps", "--data", "two_applications")
    assert code == 2
    assert "abstrakt" in err

    code, out, _ = run(capsys, "run", WS, "--module", "LoanApps", "--data", "two_applications", "--allow-abstract")
    assert code == 0
    assert "lowLValue(l2, 9000)." in out


def test_run_conform_reports_violation(capsys, mutant):
    path = str(mutant("lower_threshold"))
    code, out, _ = run(capsys, "run", path, "--module", "PrivateLoanApps", "--data", "mixed_portfolio", "--conform")

    assert code == 1
    assert "% PrivateLoanApps verletzt non_shrinkable(lowLValue/2)" in out


def test_run_unknown_dataset(capsys):
    code, _, err = run(capsys, "run", WS, "--module", "MortgageApps", "--data", "nope")
    assert code == 2
    assert "nope" in err


def test_check_pristine_matches_golden(capsys):
    started = time.perf_counter()
    code, out, _ = run(capsys, "check", WS, "--data", DATA)

    assert time.perf_counter() - started < 1.0
    assert code == 0
    assert json.loads(out) == json.loads(GOLDEN_REPORT.read_text(encoding="utf-8"))


def test_check_output_is_byte_identical(capsys):
    _, first, _ = run(capsys, "check", WS, "--data", DATA)
    _, second, _ = run(capsys, "check", WS, "--data", DATA)
    assert first == second


def test_check_timing_flag(capsys):
    code, out, _ = run(capsys, "check", WS, "--structural", "--timing")
    timing = json.loads(out)["timing"]

    assert code == 0
    assert timing["check_seconds"] is not None
    assert timing["total_seconds"] >= timing["check_seconds"]


def test_check_behavioral_without_data(capsys):
    code, _, err = run(capsys, "check", WS, "--behavioral")
    assert code == 2
    assert "--data" in err


def test_check_affected_needs_module(capsys):
    code, _, err = run(capsys, "check", WS, "--affected")
    assert code == 2
    assert "--module" in err


def test_check_affected_descendants(capsys, mutant):
    path = str(mutant("extra_output"))

    code, out, _ = run(capsys, "check", path, "--module", "MortgageApps", "--structural")
    assert code == 0

    code, out, _ = run(capsys, "check", path, "--module", "MortgageApps", "--affected", "--structural")
    payload = json.loads(out)
    assert code == 1
    assert payload["modules"] == ["CommercialMortgageApps", "MortgageApps"]
    assert [v["child"] for v in payload["structural_violations"]] == ["CommercialMortgageApps"]


@pytest.mark.parametrize("name, expected", [
    ("extra_input", "no_additional_input"),
    ("removed_input", "non_omitable_input"),
    ("extra_output", "no_additional_output"),
    ("removed_output", "non_omitable_output"),
])
def test_check_structural_mutants(capsys, mutant, name, expected):
    code, out, _ = run(capsys, "check", str(mutant(name)), "--structural")
    payload = json.loads(out)

    assert code == 1
    assert [v["restriction"]["kind"] for v in payload["structural_violations"]] == [expected]


def test_check_behavioral_mutant(capsys, mutant):
    path = mutant("weaker_coverage")
    code, out, _ = run(capsys, "check", str(path), "--behavioral", "--data", str(path / "data"))
    payload = json.loads(out)

    kinds = {(v["restriction"]["kind"], v["predicate"]) for v in payload["behavioral_violations"]}
    assert code == 1
    assert ("non_growable", "cwGood/1") in kinds
    assert payload["checks"] == {"structural": False, "behavioral": True}


def test_check_text_format(capsys, mutant):
    code, out, _ = run(capsys, "check", str(mutant("extra_output")), "--format", "text")

    assert code == 1
    assert "Strukturelle Verletzungen: 1" in out
    assert "CommercialMortgageApps.rmod:" in out


def test_check_single_module(capsys):
    code, out, _ = run(capsys, "check", WS, "--module", "MortgageApps", "--data", DATA)
    payload = json.loads(out)

    assert code == 0
    assert payload["modules"] == ["MortgageApps"]
    assert [b["child"] for b in payload["behavior"]] == ["MortgageApps"]


def test_invalid_workspace_exit_code(capsys, tmp_path):
    (tmp_path / "Broken.rmod").write_text("module Broken { rules { add R1 p(X) :- q(X). } }", encoding="utf-8")
    code, out, err = run(capsys, "check", str(tmp_path))

    assert code == 2
    assert out == ""
    assert "Broken.rmod:1:" in err


def test_invalid_derivation_cap(capsys, monkeypatch):
    monkeypatch.setenv("RMOD_DERIVATION_CAP", "viele")
    code, _, err = run(capsys, "info", WS, "--module", "LoanApps")

    assert code == 2
    assert "RMOD_DERIVATION_CAP" in err


def test_generate(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "--out", str(tmp_path), "--count", "2", "--seed", "7")

    assert code == 0
    assert len(out.splitlines()) == 2
    assert sorted(p.name for p in tmp_path.iterdir()) == ["synthetic_01.facts", "synthetic_02.facts"]
