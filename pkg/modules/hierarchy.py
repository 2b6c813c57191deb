"""
Vererbungshierarchie und Auflösung durch inkrementelle Modifikation.

Für jedes Modul gilt entlang der Parent-Kette:
    R_m' = (R_m ∪ R+) \\ R-,  I_m' = (I_m ∪ I+) \\ I-,  O_m' = (O_m ∪ O+) \\ O-
und die Restriktionen werden vereinigt (S_m' = S_m ∪ S+).
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

import networkx as nx

from modules.abstractness import abstractness, module_predicates
from modules.model import Hierarchy, ResolvedModule, RuleModule
from rules.errors import (
    DuplicateRuleId, HierarchyInvalid, InterfaceOverlap, RemovedInterfaceNotInherited,
    RemovedRuleNotInherited, UnknownModule,
)
from rules.terms import Predicate, Rule

logger = logging.getLogger(__name__)


# =============================================================================
# VALIDIERUNG
# =============================================================================

@dataclass(frozen=True)
class CycleDetected:
    path: Tuple[str, ...]

    @property
    def module_id(self) -> str:
        return self.path[0]

    def __str__(self) -> str:
        return f"Zyklus in der Hierarchie: {' -> '.join(self.path)}"


@dataclass(frozen=True)
class UnknownParent:
    module_id: str
    parent_id: str

    def __str__(self) -> str:
        return f"Modul {self.module_id} erweitert unbekanntes Modul {self.parent_id}"


@dataclass(frozen=True)
class AddRemoveConflict:
    module_id: str
    rule_id: str

    def __str__(self) -> str:
        return f"Modul {self.module_id} fügt Regel {self.rule_id} hinzu und entfernt sie zugleich"


@dataclass(frozen=True)
class RootRemoval:
    module_id: str

    def __str__(self) -> str:
        return f"Wurzelmodul {self.module_id} darf nichts entfernen"


HierarchyIssue = Union[CycleDetected, UnknownParent, AddRemoveConflict, RootRemoval]


def _parent_graph(h: Hierarchy) -> nx.DiGraph:
    """Kind -> Parent, nur für bekannte Parents."""
    graph = nx.DiGraph()
    graph.add_nodes_from(h.modules)
    for module in h.modules.values():
        if module.parent is not None and module.parent in h.modules:
            graph.add_edge(module.id, module.parent)
    return graph


def validate_hierarchy(h: Hierarchy) -> List[HierarchyIssue]:
    """
    Prüft Waldeigenschaft, Parent-Referenzen und Delta-Invarianten.

    Returns:
        Liste der Probleme (leer = gültig), deterministisch sortiert
    """
    issues: List[HierarchyIssue] = []

    for cycle in nx.simple_cycles(_parent_graph(h)):
        start = cycle.index(min(cycle))
        rotated = cycle[start:] + cycle[:start]
        issues.append(CycleDetected(tuple(rotated + [rotated[0]])))

    for module_id in h.ids:
        module = h.modules[module_id]
        if module.parent is not None and module.parent not in h.modules:
            issues.append(UnknownParent(module_id, module.parent))
        for rule_id in sorted(module.added_rule_ids & module.rules_removed):
            issues.append(AddRemoveConflict(module_id, rule_id))
        if module.is_root and module.has_removals:
            issues.append(RootRemoval(module_id))

    issues.sort(key=lambda issue: (issue.module_id, type(issue).__name__, str(issue)))
    return issues


# =============================================================================
# NAVIGATION
# =============================================================================

def get_module(h: Hierarchy, module_id: str) -> RuleModule:
    try:
        return h.modules[module_id]
    except KeyError:
        raise UnknownModule(module_id) from None


def ancestors(h: Hierarchy, module_id: str) -> List[str]:
    """
    Vorfahren eines Moduls, Wurzel zuerst (ohne das Modul selbst).

    Raises:
        UnknownModule: Modul existiert nicht
        HierarchyInvalid: Zyklus oder unbekannter Parent in der Kette
    """
    chain: List[str] = []
    seen = {module_id}
    current = get_module(h, module_id)
    while current.parent is not None:
        if current.parent not in h.modules:
            raise HierarchyInvalid([UnknownParent(current.id, current.parent)])
        if current.parent in seen:
            path = [current.parent] + list(reversed(chain))
            raise HierarchyInvalid([CycleDetected(tuple(path))])
        seen.add(current.parent)
        chain.append(current.parent)
        current = h.modules[current.parent]
    return list(reversed(chain))


def children(h: Hierarchy, module_id: str) -> List[str]:
    return sorted(m.id for m in h.modules.values() if m.parent == module_id)


def descendants(h: Hierarchy, module_id: str) -> List[str]:
    """Alle Nachfahren (transitiv), sortiert."""
    graph = _parent_graph(h)
    if module_id not in graph:
        raise UnknownModule(module_id)
    return sorted(nx.ancestors(graph, module_id))


def edges(h: Hierarchy) -> List[Tuple[str, str]]:
    """Alle Vererbungskanten als (Kind, Parent), sortiert."""
    return sorted(
        (m.id, m.parent) for m in h.modules.values()
        if m.parent is not None and m.parent in h.modules
    )


# =============================================================================
# AUFLÖSUNG
# =============================================================================

def _merge_rules(module: RuleModule, inherited: Tuple[Rule, ...]) -> Tuple[Rule, ...]:
    rules: Dict[str, Rule] = {rule.id: rule for rule in inherited}

    for rule_id in sorted(module.rules_removed):
        if rule_id not in rules:
            raise RemovedRuleNotInherited(module.id, rule_id)
        del rules[rule_id]

    for rule in module.rules_added:
        existing = rules.get(rule.id)
        if existing is None:
            rules[rule.id] = rule
        elif existing != rule:
            raise DuplicateRuleId(module.id, rule.id)

    return tuple(rules.values())


def _merge_interface(module: RuleModule, inherited: FrozenSet[Predicate], added: FrozenSet[Predicate],
                     removed: FrozenSet[Predicate], side: str) -> FrozenSet[Predicate]:
    for predicate in sorted(removed):
        if predicate not in inherited:
            raise RemovedInterfaceNotInherited(module.id, predicate, side)
    return (inherited | added) - removed


def _check_delta(module: RuleModule) -> None:
    conflicts = [AddRemoveConflict(module.id, rid) for rid in sorted(module.added_rule_ids & module.rules_removed)]
    if module.is_root and module.has_removals:
        conflicts.append(RootRemoval(module.id))
    if conflicts:
        raise HierarchyInvalid(conflicts)


def resolve(h: Hierarchy, module_id: str) -> ResolvedModule:
    """
    Löst die Vererbung eines Moduls entlang der Parent-Kette auf.

    Args:
        h: Hierarchie
        module_id: ID des Moduls

    Returns:
        ResolvedModule mit R_m, I_m, O_m, S_m, P_m und abstrakten Prädikaten

    Raises:
        UnknownModule, HierarchyInvalid, RemovedRuleNotInherited,
        RemovedInterfaceNotInherited, DuplicateRuleId, InterfaceOverlap
    """
    cached = h._resolved.get(module_id)
    if cached is not None:
        return cached

    module = get_module(h, module_id)
    ancestors(h, module_id)
    _check_delta(module)

    if module.parent is None:
        base: Optional[ResolvedModule] = None
        rules: Tuple[Rule, ...] = ()
        inputs = outputs = frozenset()
        restrictions = frozenset()
    else:
        base = resolve(h, module.parent)
        rules, inputs, outputs, restrictions = base.rules, base.inputs, base.outputs, base.restrictions

    rules = _merge_rules(module, rules)
    inputs = _merge_interface(module, inputs, module.inputs_added, module.inputs_removed, "Input")
    outputs = _merge_interface(module, outputs, module.outputs_added, module.outputs_removed, "Output")

    overlap = inputs & outputs
    if overlap:
        raise InterfaceOverlap(module.id, min(overlap))

    predicates = module_predicates(rules, inputs, outputs)
    undefined, abstract = abstractness(rules, inputs, predicates)

    resolved = ResolvedModule(
        id=module.id,
        rules=rules,
        inputs=inputs,
        outputs=outputs,
        restrictions=restrictions | module.restrictions_added,
        intended=module.intended,
        predicates=predicates,
        undefined_predicates=undefined,
        abstract_predicates=abstract,
    )
    logger.debug(
        "Modul %s aufgelöst: %d Regeln, %d Inputs, %d Outputs, abstrakt=%s",
        module.id, len(rules), len(inputs), len(outputs), resolved.is_abstract,
    )
    h._resolved[module_id] = resolved
    return resolved


def abstract_leaves(h: Hierarchy) -> List[str]:
    """Blattmodule, die abstrakt sind (Warnung: Blätter sollten konkret sein)."""
    parents = {m.parent for m in h.modules.values() if m.parent is not None}
    return [
        module_id for module_id in h.ids
        if module_id not in parents and resolve(h, module_id).is_abstract
    ]
