"""
Modifikationsrestriktionen: Validierung, Vererbung und strukturelle Prüfung.

Ein Kindmodul ist strukturell konsistent, wenn seine Deltas keine
Restriktion aus der aufgelösten Restriktionsmenge des Parents verletzen.
"""

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Tuple

from config.settings import (
    NO_ADDITIONAL_INPUT, NO_ADDITIONAL_OUTPUT, NON_OMITABLE_INPUT, NON_OMITABLE_OUTPUT,
)
from modules.hierarchy import descendants, edges, get_module, resolve
from modules.model import Hierarchy, Restriction
from rules.errors import SourceLocation
from rules.terms import Predicate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RestrictionTargetMissing:
    module_id: str
    restriction: Restriction

    def __str__(self) -> str:
        side = "Input" if self.restriction.side == "input" else "Output"
        return (f"Restriktion {self.restriction} in Modul {self.module_id}: "
                f"{self.restriction.predicate} ist kein {side}-Prädikat")


@dataclass(frozen=True)
class StructuralViolation:
    """Verletzung einer strukturellen Restriktion durch ein Kindmodul."""

    child: str
    parent: str
    restriction: Restriction
    evidence: Tuple[Predicate, ...]
    location: Optional[SourceLocation] = field(default=None, compare=False)

    @property
    def sort_key(self) -> Tuple[str, str, str]:
        predicate = str(self.restriction.predicate or self.evidence[0])
        return (self.child, predicate, self.restriction.kind)

    def __str__(self) -> str:
        evidence = ", ".join(str(p) for p in self.evidence)
        return f"{self.child} verletzt {self.restriction} von {self.parent} ({evidence})"


# =============================================================================
# VALIDIERUNG UND VERERBUNG
# =============================================================================

def validate_restrictions(h: Hierarchy, module_id: str) -> List[RestrictionTargetMissing]:
    """
    Prüft, dass jede prädikatbezogene Restriktion aus S+ auf ein Prädikat
    der richtigen Schnittstellenseite des deklarierenden Moduls zeigt.
    """
    module = get_module(h, module_id)
    resolved = resolve(h, module_id)

    missing = []
    for restriction in sorted(module.restrictions_added, key=lambda r: r.sort_key):
        if restriction.side is None:
            continue
        interface = resolved.inputs if restriction.side == "input" else resolved.outputs
        if restriction.predicate not in interface:
            missing.append(RestrictionTargetMissing(module_id, restriction))
    return missing


def resolve_restrictions(h: Hierarchy, module_id: str) -> FrozenSet[Restriction]:
    """S_m' = S_m ∪ S+ entlang der ganzen Parent-Kette."""
    return resolve(h, module_id).restrictions


# =============================================================================
# STRUKTURELLE PRÜFUNG
# =============================================================================

def check_structural(h: Hierarchy, child_id: str) -> List[StructuralViolation]:
    """
    Prüft die Deltas eines Kindmoduls gegen die Restriktionen des Parents.

    Jede verletzte Bedingung ergibt genau einen Eintrag. Wurzelmodule haben
    nichts zu prüfen.

    Args:
        h: Hierarchie
        child_id: ID des Kindmoduls

    Returns:
        Liste der Verletzungen (leer = konsistent)
    """
    child = get_module(h, child_id)
    if child.parent is None:
        return []

    restrictions = resolve(h, child.parent).restrictions
    violations: List[StructuralViolation] = []

    def report(restriction: Restriction, evidence) -> None:
        violations.append(StructuralViolation(child.id, child.parent, restriction, tuple(sorted(evidence))))

    for restriction in sorted(restrictions, key=lambda r: r.sort_key):
        if restriction.kind == NO_ADDITIONAL_INPUT and child.inputs_added:
            report(restriction, child.inputs_added)
        elif restriction.kind == NO_ADDITIONAL_OUTPUT and child.outputs_added:
            report(restriction, child.outputs_added)
        elif restriction.kind == NON_OMITABLE_INPUT and restriction.predicate in child.inputs_removed:
            report(restriction, [restriction.predicate])
        elif restriction.kind == NON_OMITABLE_OUTPUT and restriction.predicate in child.outputs_removed:
            report(restriction, [restriction.predicate])

    if violations:
        logger.debug("Modul %s: %d strukturelle Verletzungen", child_id, len(violations))
    return sorted(violations, key=lambda v: v.sort_key)


def check_all_structural(h: Hierarchy) -> List[StructuralViolation]:
    """Strukturelle Prüfung über alle Vererbungskanten."""
    violations = []
    for child_id, _ in edges(h):
        violations.extend(check_structural(h, child_id))
    return sorted(violations, key=lambda v: v.sort_key)


def affected_by_restriction_change(h: Hierarchy, module_id: str) -> List[str]:
    """Module, die nach einer Restriktionsänderung an `module_id` neu zu prüfen sind."""
    return [module_id] + descendants(h, module_id)
