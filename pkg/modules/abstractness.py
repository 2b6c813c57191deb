"""
Abstrakte Prädikate und Module.

Ein Prädikat ist konkret, wenn es Input oder `true/0` ist oder nur von
konkreten Prädikaten abhängt. Berechnet wird der größte Fixpunkt von
"konkret": Startmenge der abstrakten Prädikate sind die undefinierten,
abstrakt ist außerdem jedes Prädikat, von dem aus eine undefinierte
erreichbar ist.
"""

import logging
from typing import FrozenSet, Iterable, Tuple

import networkx as nx

from modules.model import ResolvedModule
from rules.analysis import dependency_digraph
from rules.terms import TRUE, Predicate, Rule

logger = logging.getLogger(__name__)


def module_predicates(rules: Iterable[Rule], inputs: FrozenSet[Predicate],
                      outputs: FrozenSet[Predicate]) -> FrozenSet[Predicate]:
    """P_m = I_m ∪ O_m ∪ alle B_r ∪ alle H_r."""
    predicates = set(inputs) | set(outputs)
    for rule in rules:
        predicates |= rule.body_predicates | rule.head_predicates
    return frozenset(predicates)


def dependency_graph(rm: ResolvedModule) -> FrozenSet[Tuple[Predicate, Predicate]]:
    """
    Abhängigkeitskanten (p, p') eines Moduls.

    Eine Kante existiert genau dann, wenn eine Regel p im Kopf und p' im
    Rumpf (positiv oder negiert) hat.
    """
    return frozenset(dependency_digraph(rm.rules).edges())


def abstractness(rules: Tuple[Rule, ...], inputs: FrozenSet[Predicate],
                 predicates: FrozenSet[Predicate]) -> Tuple[FrozenSet[Predicate], FrozenSet[Predicate]]:
    """
    Berechnet undefinierte und abstrakte Prädikate.

    Args:
        rules: Regelmenge R_m
        inputs: Inputprädikate I_m
        predicates: P_m

    Returns:
        (undefinierte Prädikate, abstrakte Prädikate)
    """
    defined = {rule.head.predicate for rule in rules}
    grounded = set(inputs) | {TRUE}
    undefined = frozenset(p for p in predicates if p not in grounded and p not in defined)
    if not undefined:
        return undefined, frozenset()

    graph = dependency_digraph(rules)
    graph.add_nodes_from(predicates)
    # Inputs und true sind immer konkret, auch wenn Regeln sie definieren
    graph.remove_edges_from([(p, q) for p in grounded if p in graph for q in list(graph.successors(p))])

    abstract = set(undefined)
    for predicate in undefined:
        abstract |= nx.ancestors(graph, predicate)

    result = frozenset(p for p in abstract if p in predicates)
    logger.debug("Abstrakte Prädikate: %s", sorted(str(p) for p in result))
    return undefined, result


def concrete_predicates(rm: ResolvedModule) -> FrozenSet[Predicate]:
    """Komplement der abstrakten Prädikate innerhalb von P_m."""
    _, abstract = abstractness(rm.rules, rm.inputs, rm.predicates)
    return rm.predicates - abstract
