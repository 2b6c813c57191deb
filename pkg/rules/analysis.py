"""
Statische Analyse von Regelmengen.

Sicherheit (gebundene Variablen), Prädikat-Abhängigkeitsgraph und
Stratifizierung für Negation.
"""

import logging
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set

import networkx as nx

from rules.errors import NotStratifiable, SafetyError
from rules.terms import (
    Assignment, Atom, Comparison, Negation, Predicate, Rule, Variable,
    expression_variables,
)

logger = logging.getLogger(__name__)


# =============================================================================
# SICHERHEIT
# =============================================================================

def bound_variables(rule: Rule) -> Set[Variable]:
    """
    Variablen, die durch positive Atome oder sichere Zuweisungen gebunden sind.

    Zuweisungen binden ihr Ziel, sobald alle Variablen der rechten Seite
    gebunden sind; `X = Y` mit gebundenem X bindet umgekehrt Y.
    """
    bound: Set[Variable] = set()
    for literal in rule.body:
        if isinstance(literal, Atom):
            bound.update(literal.variables())

    assignments = [l for l in rule.body if isinstance(l, Assignment)]
    changed = True
    while changed:
        changed = False
        for assignment in assignments:
            rhs = set(expression_variables(assignment.expression))
            if assignment.target not in bound and rhs <= bound:
                bound.add(assignment.target)
                changed = True
            elif (assignment.target in bound and isinstance(assignment.expression, Variable)
                  and assignment.expression not in bound):
                bound.add(assignment.expression)
                changed = True
    return bound


def check_safety(rule: Rule) -> None:
    """
    Prüft, dass alle Variablen in Kopf, negierten Atomen, Vergleichen und
    Zuweisungen gebunden sind.

    Raises:
        SafetyError: nennt die erste ungebundene Variable
    """
    bound = bound_variables(rule)

    ordered: List[Variable] = list(rule.head.variables())
    for literal in rule.body:
        if isinstance(literal, (Negation, Comparison, Assignment)):
            ordered.extend(literal.variables())

    for variable in ordered:
        if variable not in bound:
            raise SafetyError(rule.id, variable.name)


# =============================================================================
# ABHÄNGIGKEITSGRAPH
# =============================================================================

def dependency_digraph(rules: Iterable[Rule]) -> nx.DiGraph:
    """
    Gerichteter Graph Kopf -> Rumpfprädikat.

    Kanten tragen das Attribut `negative` (True, falls mindestens eine
    Abhängigkeit über ein negiertes Atom läuft).
    """
    graph = nx.DiGraph()
    for rule in rules:
        head = rule.head.predicate
        graph.add_node(head)
        for literal in rule.body:
            if isinstance(literal, Atom):
                target, negative = literal.predicate, False
            elif isinstance(literal, Negation):
                target, negative = literal.atom.predicate, True
            else:
                continue
            if graph.has_edge(head, target):
                graph[head][target]["negative"] |= negative
            else:
                graph.add_edge(head, target, negative=negative)
    return graph


# =============================================================================
# STRATIFIZIERUNG
# =============================================================================

def _negative_cycle(graph: nx.DiGraph, component: Set[Predicate]) -> Sequence[str]:
    subgraph = graph.subgraph(component)
    for source, target, negative in sorted(subgraph.edges(data="negative")):
        if negative:
            path = nx.shortest_path(subgraph, target, source)
            return [str(p) for p in [source] + path]
    return []


def stratify(rules: Iterable[Rule]) -> List[FrozenSet[Predicate]]:
    """
    Ordnet Prädikate Strata zu.

    Negierte Abhängigkeiten zeigen in echt niedrigere Strata, positive in
    niedrigere oder gleiche. Prädikate ohne Regeln landen in Stratum 0.

    Args:
        rules: Regelmenge

    Returns:
        Liste von Strata (aufsteigend)

    Raises:
        NotStratifiable: bei Negation innerhalb eines Zyklus
    """
    graph = dependency_digraph(rules)
    if graph.number_of_nodes() == 0:
        return []

    condensed = nx.condensation(graph)
    members: Dict[int, Set[Predicate]] = {
        node: set(data["members"]) for node, data in condensed.nodes(data=True)
    }

    for node, component in members.items():
        cycle = _negative_cycle(graph, component)
        if cycle:
            raise NotStratifiable(cycle)

    # Rumpf vor Kopf: umgekehrte topologische Ordnung
    level: Dict[int, int] = {}
    for node in reversed(list(nx.topological_sort(condensed))):
        best = 0
        for _, successor in condensed.out_edges(node):
            negative = any(
                graph[u][v]["negative"]
                for u in members[node]
                for v in graph.successors(u)
                if v in members[successor]
            )
            best = max(best, level[successor] + (1 if negative else 0))
        level[node] = best

    strata: Dict[int, Set[Predicate]] = {}
    for node, number in level.items():
        strata.setdefault(number, set()).update(members[node])

    result = [frozenset(strata[n]) for n in sorted(strata)]
    logger.debug("Stratifizierung: %s", [sorted(str(p) for p in s) for s in result])
    return result


def stratum_index(strata: Sequence[FrozenSet[Predicate]]) -> Dict[Predicate, int]:
    return {p: i for i, stratum in enumerate(strata) for p in stratum}
