"""Tests für Ausführung, Änderungsklassen und Verhaltenskonformität."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from config.settings import EngineSettings
from conformance.behavior import (
    ChangeClass, behavioral_violations, check_behavioral, classify_change,
    detect_behavioral_modifications, execute, is_applicable, join_all,
)
from data.loader import load_datasets, load_workspace
from modules.hierarchy import resolve
from modules.model import Restriction
from rules.errors import AbstractModuleExecution, NoApplicableDatasets, NotApplicable
from rules.terms import Dataset, Predicate, number, string, symbol
from tests.oracle import naive_evaluate, naive_order

P = Predicate.from_signature


def s(*names):
    return {tuple(symbol(n) for n in name.split(",")) for name in names}


# =============================================================================
# ÄNDERUNGSKLASSEN
# =============================================================================

@pytest.mark.parametrize("parent, child, expected", [
    (s("a", "b"), s("a", "b"), ChangeClass.UNCHANGED),
    (s("a"), s("a", "b"), ChangeClass.GROWN),
    (s("a", "b"), s("b"), ChangeClass.SHRUNK),
    (s("a"), s("b"), ChangeClass.GROWN_AND_SHRUNK),
    (set(), set(), ChangeClass.UNCHANGED),
])
def test_classify_change(parent, child, expected):
    assert classify_change(frozenset(parent), frozenset(child)) is expected


def test_join_table():
    assert ChangeClass.GROWN.join(ChangeClass.SHRUNK) is ChangeClass.GROWN_AND_SHRUNK
    assert ChangeClass.UNCHANGED.join(ChangeClass.GROWN) is ChangeClass.GROWN
    assert join_all([]) is ChangeClass.UNCHANGED
    assert join_all([ChangeClass.SHRUNK, ChangeClass.UNCHANGED]) is ChangeClass.SHRUNK


facts = st.frozensets(st.sampled_from([(symbol(c),) for c in "abcdef"]))
classes = st.sampled_from(list(ChangeClass))


@given(facts, facts)
def test_swapping_roles_flips_class(a, b):
    assert classify_change(b, a) is classify_change(a, b).flipped()


@given(classes, classes, classes)
def test_join_is_a_semilattice(x, y, z):
    assert x.join(y) is y.join(x)
    assert x.join(x) is x
    assert x.join(y).join(z) is x.join(y.join(z))
    assert x.join(ChangeClass.UNCHANGED) is x


# =============================================================================
# AUSFÜHRUNG
# =============================================================================

def test_execute_mortgage_on_two_applications(loans):
    rm = resolve(loans.hierarchy, "MortgageApps")
    result = execute(rm, loans.datasets["two_applications"])

    assert result.facts(P("cwGood/1")) == s("l1")
    assert result.facts(P("cwBad/1")) == s("l2")
    assert result.facts(P("lowPropValue/2")) == s("l2,p2")
    assert result.facts(P("properties/2")) == s("l1,p1", "l1,p3", "l2,p2")
    assert result.facts(P("securities/2")) == result.facts(P("properties/2"))
    assert set(result.outputs) == rm.outputs


def test_execute_private_on_two_applications(loans):
    result = execute(resolve(loans.hierarchy, "PrivateLoanApps"), loans.datasets["two_applications"])

    assert result.facts(P("lowLValue/2")) == {(symbol("l2"), number(9000))}
    assert result.facts(P("incomes/2")) == {(symbol("l1"), number(288000)), (symbol("l2"), number(4320))}
    assert result.facts(P("cwGood/1")) == s("l1")
    assert result.facts(P("lowIncome/2")) == frozenset()


def test_execute_private_on_mixed_portfolio(loans):
    result = execute(resolve(loans.hierarchy, "PrivateLoanApps"), loans.datasets["mixed_portfolio"])

    assert result.facts(P("cwGood/1")) == s("l2", "l3", "l4")
    assert result.facts(P("cwBad/1")) == s("l1")
    assert result.facts(P("lowIncome/2")) == {(symbol("l1"), number(550))}


def test_only_input_extensions_are_used(loans):
    d = loans.datasets["two_applications"]
    polluted = Dataset("polluted", {**d.extensions, P("cwGood/1"): s("l2")})

    result = execute(resolve(loans.hierarchy, "MortgageApps"), polluted)
    assert result.facts(P("cwGood/1")) == s("l1")


def test_abstract_module_is_not_executed(loans):
    rm = resolve(loans.hierarchy, "LoanApps")
    d = loans.datasets["two_applications"]

    with pytest.raises(AbstractModuleExecution):
        execute(rm, d)

    result = execute(rm, d, allow_abstract=True)
    assert result.facts(P("lowLValue/2")) == {(symbol("l2"), number(9000))}
    assert result.facts(P("cwGood/1")) == frozenset()


def test_not_applicable_names_missing_inputs(loans):
    rm = resolve(loans.hierarchy, "PrivateLoanApps")
    d = loans.datasets["two_applications"].restrict(frozenset({P("loan/1"), P("lValue/2")}))

    assert not is_applicable(d, rm)
    with pytest.raises(NotApplicable) as info:
        execute(rm, d)
    assert P("income/2") in info.value.missing


def test_empty_extension_counts_as_present():
    d = Dataset("empty", {P("a/1"): set()})
    assert d.schema == {P("a/1")}


# =============================================================================
# ERKENNUNG
# =============================================================================

def test_pristine_behavior(loans, loan_datasets):
    datasets = list(loan_datasets.values())
    report = detect_behavioral_modifications(loans.hierarchy, "LoanApps", "PrivateLoanApps", datasets)

    assert set(report.classes) == {P("lowLValue/2"), P("priorityOver/2")}
    assert report.classes[P("lowLValue/2")] is ChangeClass.GROWN
    assert report.classes[P("priorityOver/2")] is ChangeClass.UNCHANGED
    assert report.per_dataset["two_applications"][P("lowLValue/2")] is ChangeClass.UNCHANGED
    assert report.not_comparable == {P("cwBad/1"), P("cwGood/1"), P("sValue/2")}
    assert report.removed_outputs == {P("securities/2"), P("security/1")}
    assert report.datasets == ("mixed_portfolio", "two_applications")
    assert report.undeclared_modifications == ()

    restrictions = resolve(loans.hierarchy, "LoanApps").restrictions
    assert behavioral_violations(report, restrictions) == []


def test_mortgage_not_comparable(loans, loan_datasets):
    report = detect_behavioral_modifications(
        loans.hierarchy, "LoanApps", "MortgageApps", list(loan_datasets.values()),
    )
    assert report.not_comparable == {
        P("cwBad/1"), P("cwGood/1"), P("sValue/2"), P("securities/2"), P("security/1"),
    }
    assert all(c is ChangeClass.UNCHANGED for c in report.classes.values())


def test_no_datasets(loans):
    with pytest.raises(NoApplicableDatasets):
        detect_behavioral_modifications(loans.hierarchy, "LoanApps", "MortgageApps", [])


def test_lower_threshold_mutant(mutant):
    path = mutant("lower_threshold")
    workspace = load_workspace(path)
    violations = check_behavioral(workspace.hierarchy, "PrivateLoanApps", list(load_datasets(path / "data").values()))

    assert len(violations) == 1
    violation = violations[0]
    assert violation.restriction == Restriction("non_shrinkable", P("lowLValue/2"))
    assert violation.observed is ChangeClass.SHRUNK
    assert violation.dataset == "mixed_portfolio"
    assert violation.sample == ((symbol("l1"), number(9000)),)


def test_weaker_coverage_mutant(mutant):
    path = mutant("weaker_coverage")
    workspace = load_workspace(path)
    violations = check_behavioral(
        workspace.hierarchy, "GenerousPrivateLoanApps", list(load_datasets(path / "data").values()),
    )
    by_kind = {(v.restriction.kind, str(v.predicate)): v for v in violations}

    growing = by_kind[("non_growable", "cwGood/1")]
    assert growing.observed is ChangeClass.GROWN
    assert growing.dataset == "two_applications"
    assert growing.sample == ((symbol("l2"),),)
    assert ("non_shrinkable", "cwBad/1") in by_kind


def test_witness_sample_size(mutant):
    path = mutant("weaker_coverage")
    workspace = load_workspace(path)
    settings = EngineSettings(witness_sample_size=1)
    report = detect_behavioral_modifications(
        workspace.hierarchy, "PrivateLoanApps", "GenerousPrivateLoanApps",
        list(load_datasets(path / "data").values()), settings,
    )
    restrictions = resolve(workspace.hierarchy, "PrivateLoanApps").restrictions

    assert all(len(v.sample) <= 1 for v in behavioral_violations(report, restrictions, settings))


def test_undeclared_modification_is_reported(mutant):
    path = mutant("weaker_coverage")
    workspace = load_workspace(path)
    report = detect_behavioral_modifications(
        workspace.hierarchy, "PrivateLoanApps", "GenerousPrivateLoanApps",
        list(load_datasets(path / "data").values()),
    )

    assert (P("cwGood/1"), ChangeClass.GROWN) in report.undeclared_modifications


def test_quoted_customers_join_with_income(loans):
    d = loans.datasets["mixed_portfolio"]
    assert (symbol("l1"), string("Anna Berger")) in d.facts(P("customer/2"))

    result = execute(resolve(loans.hierarchy, "PrivateLoanApps"), d)
    assert (symbol("l1"), number(1980)) in result.facts(P("incomes/2"))


# =============================================================================
# ABGLEICH MIT DEM NAIVEN AUSWERTER
# =============================================================================

def oracle_outputs(rm, d):
    """Outputs von `rm` auf `d`, unabhängig vom Engine-Code berechnet."""
    rules = list(rm.rules)
    model = naive_evaluate(rules, d.restrict(rm.inputs), naive_order(rules))
    return {p: model.get(p, frozenset()) for p in rm.outputs}


@pytest.mark.parametrize("module_id", ["MortgageApps", "PrivateLoanApps"])
@pytest.mark.parametrize("dataset", ["mixed_portfolio", "two_applications"])
def test_execute_matches_oracle(loans, loan_datasets, module_id, dataset):
    rm = resolve(loans.hierarchy, module_id)
    d = loan_datasets[dataset]

    assert execute(rm, d).outputs == oracle_outputs(rm, d)


def _oracle_witness(h, parent_id, child_id, datasets, predicate, growing):
    """Erster Datensatz (nach Namen) mit der verbotenen Änderung und deren Tupel."""
    parent, child = resolve(h, parent_id), resolve(h, child_id)
    for d in sorted(datasets, key=lambda d: d.name):
        before = oracle_outputs(parent, d)[predicate]
        after = oracle_outputs(child, d)[predicate]
        differing = after - before if growing else before - after
        if differing:
            return d.name, differing
    return None, frozenset()


def test_lower_threshold_witness_matches_oracle(mutant):
    path = mutant("lower_threshold")
    h = load_workspace(path).hierarchy
    datasets = list(load_datasets(path / "data").values())

    name, shrunk = _oracle_witness(h, "LoanApps", "PrivateLoanApps", datasets, P("lowLValue/2"), growing=False)
    (violation,) = check_behavioral(h, "PrivateLoanApps", datasets)

    assert shrunk
    assert violation.dataset == name
    assert set(violation.sample) <= shrunk
    assert len(violation.sample) == min(len(shrunk), EngineSettings().witness_sample_size)


def test_weaker_coverage_witness_matches_oracle(mutant):
    path = mutant("weaker_coverage")
    h = load_workspace(path).hierarchy
    datasets = list(load_datasets(path / "data").values())
    violations = {
        (v.restriction.kind, v.predicate): v
        for v in check_behavioral(h, "GenerousPrivateLoanApps", datasets)
    }

    for kind, predicate, growing in (("non_growable", P("cwGood/1"), True),
                                     ("non_shrinkable", P("cwBad/1"), False)):
        name, differing = _oracle_witness(h, "PrivateLoanApps", "GenerousPrivateLoanApps",
                                          datasets, predicate, growing)
        violation = violations[(kind, predicate)]
        assert violation.dataset == name
        assert set(violation.sample) <= differing


# =============================================================================
# EIGENSCHAFTEN DER ERKENNUNG
# =============================================================================

@pytest.mark.parametrize("module_id", ["LoanApps", "MortgageApps", "PrivateLoanApps"])
def test_module_compared_with_itself_is_unchanged(loans, loan_datasets, module_id):
    report = detect_behavioral_modifications(loans.hierarchy, module_id, module_id, list(loan_datasets.values()))

    assert all(c is ChangeClass.UNCHANGED for c in report.classes.values())
    assert report.removed_outputs == frozenset()
    assert report.undeclared_modifications == ()


@pytest.mark.parametrize("child_id", ["MortgageApps", "PrivateLoanApps"])
def test_more_datasets_never_hide_changes(loans, loan_datasets, child_id):
    everything = detect_behavioral_modifications(loans.hierarchy, "LoanApps", child_id, list(loan_datasets.values()))

    for d in loan_datasets.values():
        single = detect_behavioral_modifications(loans.hierarchy, "LoanApps", child_id, [d])
        for predicate, cls in single.classes.items():
            assert cls.join(everything.classes[predicate]) is everything.classes[predicate]


def test_more_datasets_never_drop_violations(mutant):
    path = mutant("weaker_coverage")
    h = load_workspace(path).hierarchy
    datasets = list(load_datasets(path / "data").values())

    def found(ds):
        return {(v.restriction.kind, v.predicate) for v in check_behavioral(h, "GenerousPrivateLoanApps", ds)}

    everything = found(datasets)
    for d in datasets:
        assert found([d]) <= everything
