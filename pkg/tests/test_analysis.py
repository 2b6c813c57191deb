"""Tests für Sicherheit, Abhängigkeitsgraph und Stratifizierung."""

import pytest

from rules.analysis import bound_variables, dependency_digraph, stratify, stratum_index
from rules.errors import NotStratifiable
from rules.parser import parse_program, parse_rule
from rules.terms import Predicate, Variable

P = Predicate.from_signature


def test_bound_variables_follow_assignments():
    rule = parse_rule("R: p(X, T) :- q(X, V), T = V * 2, U = T + 1, U > 3.")
    assert bound_variables(rule) == {Variable("X"), Variable("V"), Variable("T"), Variable("U")}


def test_dependency_digraph_marks_negative_edges():
    graph = dependency_digraph(parse_program("""
        R1: p(X) :- q(X), not r(X).
        R2: p(X) :- r(X).
    """))

    assert set(graph.edges()) == {(P("p/1"), P("q/1")), (P("p/1"), P("r/1"))}
    assert graph[P("p/1")][P("r/1")]["negative"] is True
    assert graph[P("p/1")][P("q/1")]["negative"] is False


def test_stratify_orders_negation():
    rules = parse_program("""
        R1: reach(X, Y) :- edge(X, Y).
        R2: reach(X, Z) :- reach(X, Y), edge(Y, Z).
        R3: unreachable(X, Y) :- node(X), node(Y), not reach(X, Y).
        R4: isolated(X) :- node(X), not linked(X).
        R5: linked(X) :- unreachable(X, Y).
    """)
    index = stratum_index(stratify(rules))

    assert index[P("reach/2")] < index[P("unreachable/2")]
    assert index[P("unreachable/2")] <= index[P("linked/1")]
    assert index[P("linked/1")] < index[P("isolated/1")]
    assert index[P("edge/2")] == 0


def test_positive_recursion_is_stratifiable():
    rules = parse_program("""
        R1: even(X) :- zero(X).
        R2: even(Y) :- odd(X), succ(X, Y).
        R3: odd(Y) :- even(X), succ(X, Y).
    """)
    index = stratum_index(stratify(rules))
    assert index[P("even/1")] == index[P("odd/1")]


def test_negative_cycle_is_rejected():
    rules = parse_program("""
        R1: p(X) :- d(X), not q(X).
        R2: q(X) :- d(X), not p(X).
    """)

    with pytest.raises(NotStratifiable) as info:
        stratify(rules)

    assert "p/1" in info.value.cycle
    assert "q/1" in info.value.cycle


def test_negative_self_loop_is_rejected():
    with pytest.raises(NotStratifiable):
        stratify(parse_program("R1: p(X) :- d(X), not p(X)."))


def test_empty_program():
    assert stratify([]) == []
