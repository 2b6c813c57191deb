"""Tests für synthetische Kreditportfolios."""

import pytest

from conformance.behavior import execute, is_applicable
from data.loader import load_datasets
from data.synthetic import PREDICATES, generate_datasets, write_datasets
from modules.hierarchy import resolve


def test_generation_is_reproducible():
    assert generate_datasets(count=2, seed=3) == generate_datasets(count=2, seed=3)


def test_all_inputs_present():
    (d,) = generate_datasets(count=1, seed=1, applications=5)

    assert d.name == "synthetic_01"
    assert d.schema == set(PREDICATES.values())
    assert len(d.facts(PREDICATES["loan"])) == 5


def test_every_loan_has_value_duration_and_customer():
    (d,) = generate_datasets(count=1, seed=11, applications=20)
    loans = {fact[0] for fact in d.facts(PREDICATES["loan"])}

    for key in ("lValue", "duration", "customer"):
        assert {fact[0] for fact in d.facts(PREDICATES[key])} == loans
    customers = {fact[1] for fact in d.facts(PREDICATES["customer"])}
    assert {fact[0] for fact in d.facts(PREDICATES["income"])} == customers


def test_invalid_arguments():
    with pytest.raises(ValueError):
        generate_datasets(count=0)


def test_written_datasets_load_and_run(tmp_path, loans):
    datasets = generate_datasets(count=2, seed=5)
    write_datasets(datasets, str(tmp_path))
    loaded = load_datasets(tmp_path)

    assert loaded == {d.name: d for d in datasets}
    for d in loaded.values():
        for module_id in ("MortgageApps", "PrivateLoanApps"):
            rm = resolve(loans.hierarchy, module_id)
            assert is_applicable(d, rm)
            assert execute(rm, d).fact_count > 0
