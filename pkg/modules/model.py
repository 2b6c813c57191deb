"""
Datenmodell der Regelmodule.

RuleModule (Deltaform, wie in der Moduldatei deklariert), ResolvedModule
(vollständig aufgelöste Vererbung) sowie Restriktionen und deklarierte
Verhaltensänderungen.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, Tuple

from config.settings import (
    CHANGE_CLASSES, GLOBAL_RESTRICTIONS, PREDICATE_RESTRICTIONS, RESTRICTION_KINDS,
)
from rules.terms import Predicate, Rule


# =============================================================================
# RESTRIKTIONEN
# =============================================================================

@dataclass(frozen=True)
class Restriction:
    """
    Modifikationsrestriktion.

    `no_additional_input` und `no_additional_output` haben kein Prädikat,
    alle anderen Arten genau eins.
    """

    kind: str
    predicate: Optional[Predicate] = None

    def __post_init__(self):
        if self.kind not in RESTRICTION_KINDS:
            raise ValueError(f"Unbekannte Restriktion: {self.kind}")
        if self.kind in GLOBAL_RESTRICTIONS and self.predicate is not None:
            raise ValueError(f"Restriktion {self.kind} erwartet kein Prädikat")
        if self.kind in PREDICATE_RESTRICTIONS and self.predicate is None:
            raise ValueError(f"Restriktion {self.kind} erwartet ein Prädikat")

    @property
    def side(self) -> Optional[str]:
        """Schnittstellenseite ('input'/'output'), auf der das Prädikat liegen muss."""
        return PREDICATE_RESTRICTIONS.get(self.kind)

    @property
    def sort_key(self) -> Tuple[str, str]:
        return (self.kind, str(self.predicate) if self.predicate else "")

    def __str__(self) -> str:
        if self.predicate is None:
            return self.kind
        return f"{self.kind}({self.predicate})"


@dataclass(frozen=True)
class IntendedModification:
    """Vom Entwickler deklarierte Verhaltensänderung (`intend grown cwGood/1;`)."""

    change: str
    predicate: Predicate

    def __post_init__(self):
        if self.change not in CHANGE_CLASSES:
            raise ValueError(f"Unbekannte Änderungsklasse: {self.change}")

    @property
    def sort_key(self) -> Tuple[str, str]:
        return (str(self.predicate), self.change)

    def __str__(self) -> str:
        return f"intend {self.change} {self.predicate}"


# =============================================================================
# MODULE
# =============================================================================

@dataclass(frozen=True)
class RuleModule:
    """Regelmodul in Deltaform (R+, R-, I+, I-, O+, O-, S+)."""

    id: str
    parent: Optional[str] = None
    rules_added: Tuple[Rule, ...] = ()
    rules_removed: FrozenSet[str] = frozenset()
    inputs_added: FrozenSet[Predicate] = frozenset()
    inputs_removed: FrozenSet[Predicate] = frozenset()
    outputs_added: FrozenSet[Predicate] = frozenset()
    outputs_removed: FrozenSet[Predicate] = frozenset()
    restrictions_added: FrozenSet[Restriction] = frozenset()
    intended: FrozenSet[IntendedModification] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "rules_added", tuple(self.rules_added))
        for name in ("rules_removed", "inputs_added", "inputs_removed", "outputs_added",
                     "outputs_removed", "restrictions_added", "intended"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @property
    def is_root(self) -> bool:
        return self.parent is None

    @property
    def added_rule_ids(self) -> FrozenSet[str]:
        return frozenset(rule.id for rule in self.rules_added)

    @property
    def has_removals(self) -> bool:
        return bool(self.rules_removed or self.inputs_removed or self.outputs_removed)


@dataclass(frozen=True)
class ResolvedModule:
    """
    Modul mit vollständig aufgelöster Vererbung.

    `undefined_predicates` sind die Prädikate ohne definierende Regel
    (weder Input noch `true/0`); `abstract_predicates` enthält zusätzlich
    alle Prädikate, die von ihnen abhängen.
    """

    id: str
    rules: Tuple[Rule, ...]
    inputs: FrozenSet[Predicate]
    outputs: FrozenSet[Predicate]
    restrictions: FrozenSet[Restriction]
    intended: FrozenSet[IntendedModification]
    predicates: FrozenSet[Predicate]
    undefined_predicates: FrozenSet[Predicate]
    abstract_predicates: FrozenSet[Predicate]

    @property
    def is_abstract(self) -> bool:
        return bool(self.abstract_predicates)

    @property
    def concrete(self) -> FrozenSet[Predicate]:
        return self.predicates - self.abstract_predicates

    @property
    def rule_ids(self) -> Tuple[str, ...]:
        return tuple(rule.id for rule in self.rules)

    def rule(self, rule_id: str) -> Rule:
        for rule in self.rules:
            if rule.id == rule_id:
                return rule
        raise KeyError(rule_id)


# =============================================================================
# HIERARCHIE
# =============================================================================

@dataclass
class Hierarchy:
    """
    Vererbungshierarchie: Module nach ID, Kanten über die Parent-Links.

    Aufgelöste Module werden pro Hierarchie-Objekt zwischengespeichert.
    """

    modules: Dict[str, RuleModule] = field(default_factory=dict)
    _resolved: Dict[str, ResolvedModule] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __contains__(self, module_id: str) -> bool:
        return module_id in self.modules

    def __len__(self) -> int:
        return len(self.modules)

    @property
    def ids(self) -> Tuple[str, ...]:
        return tuple(sorted(self.modules))

    def add(self, module: RuleModule) -> None:
        self.modules[module.id] = module
        self._resolved.clear()
