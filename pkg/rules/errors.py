"""
Fehlerhierarchie für rmod.

Alle fachlichen Fehler erben von RmodError; die CLI bildet sie auf
Exit-Code 2 ab.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence


class RmodError(Exception):
    """Basisklasse aller rmod-Fehler."""


@dataclass(frozen=True)
class SourceLocation:
    """Position einer Deklaration (Datei, Zeile, Spalte; 1-basiert)."""

    path: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.path}:{self.line}:{self.column}"


class SourceError(RmodError):
    """Fehler mit Quellposition."""

    def __init__(self, message: str, location: Optional[SourceLocation] = None):
        super().__init__(message)
        self.message = message
        self.location = location

    def __str__(self) -> str:
        if self.location is None:
            return self.message
        return f"{self.location}: {self.message}"

    def at(self, location: SourceLocation) -> "SourceError":
        """Gibt den Fehler mit (neuer) Position zurück."""
        self.location = location
        return self


# =============================================================================
# REGELSPRACHE
# =============================================================================

class RuleSyntaxError(SourceError):
    """Syntaxfehler in Regel-, Fakten- oder Moduldatei."""


class DeclarationError(SourceError):
    """Ungültige Deklaration in einer Modul- oder Faktendatei (doppelt, Stelligkeit, Name)."""


class SafetyError(SourceError):
    """Regel ist nicht sicher (ungebundene Variable)."""

    def __init__(self, rule_id: str, variable: str, location: Optional[SourceLocation] = None):
        super().__init__(f"Regel {rule_id} ist nicht sicher: Variable {variable} ist nicht gebunden", location)
        self.rule_id = rule_id
        self.variable = variable


class NotStratifiable(RmodError):
    """Negation in einem Zyklus."""

    def __init__(self, cycle: Sequence[str]):
        self.cycle = list(cycle)
        path = " -> ".join(self.cycle)
        super().__init__(f"Regelmenge nicht stratifizierbar, negativer Zyklus: {path}")


class DerivationCapExceeded(RmodError):
    """Zu viele abgeleitete Fakten (vermutlich divergierende Arithmetik)."""

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"Ableitungslimit von {cap} Fakten überschritten")


# =============================================================================
# MODULMODELL
# =============================================================================

class ModelError(RmodError):
    """Fehler bei der Vererbungsauflösung."""


class UnknownModule(ModelError):
    def __init__(self, module_id: str):
        self.module_id = module_id
        super().__init__(f"Unbekanntes Modul: {module_id}")


class HierarchyInvalid(ModelError):
    def __init__(self, issues: Iterable[object]):
        self.issues = list(issues)
        details = "; ".join(str(issue) for issue in self.issues)
        super().__init__(f"Ungültige Hierarchie: {details}")


class RemovedRuleNotInherited(ModelError):
    def __init__(self, module_id: str, rule_id: str):
        self.module_id = module_id
        self.rule_id = rule_id
        super().__init__(f"Modul {module_id} entfernt Regel {rule_id}, die es nicht erbt")


class RemovedInterfaceNotInherited(ModelError):
    def __init__(self, module_id: str, predicate: object, side: str):
        self.module_id = module_id
        self.predicate = predicate
        self.side = side
        super().__init__(f"Modul {module_id} entfernt {side}-Prädikat {predicate}, das es nicht erbt")


class DuplicateRuleId(ModelError):
    def __init__(self, module_id: str, rule_id: str):
        self.module_id = module_id
        self.rule_id = rule_id
        super().__init__(f"Regel-ID {rule_id} ist in Modul {module_id} doppelt vergeben")


class InterfaceOverlap(ModelError):
    def __init__(self, module_id: str, predicate: object):
        self.module_id = module_id
        self.predicate = predicate
        super().__init__(f"Prädikat {predicate} ist in Modul {module_id} zugleich Input und Output")


# =============================================================================
# AUSFÜHRUNG
# =============================================================================

class ExecutionError(RmodError):
    """Fehler bei der Modulausführung."""


class NotApplicable(ExecutionError):
    def __init__(self, module_id: str, dataset: str, missing: Iterable[object]):
        self.module_id = module_id
        self.dataset = dataset
        self.missing = sorted(missing)
        names = ", ".join(str(p) for p in self.missing)
        super().__init__(f"Datensatz {dataset} ist für Modul {module_id} nicht anwendbar, es fehlen: {names}")


class AbstractModuleExecution(ExecutionError):
    def __init__(self, module_id: str, abstract_predicates: Iterable[object]):
        self.module_id = module_id
        self.abstract_predicates = sorted(abstract_predicates)
        names = ", ".join(str(p) for p in self.abstract_predicates)
        super().__init__(f"Modul {module_id} ist abstrakt und wird nicht ausgeführt (abstrakt: {names})")


class NoApplicableDatasets(ExecutionError):
    def __init__(self, parent_id: str, child_id: str):
        self.parent_id = parent_id
        self.child_id = child_id
        super().__init__(f"Keine Datensätze für den Vergleich {child_id} -> {parent_id}")


# =============================================================================
# WORKSPACE
# =============================================================================

class WorkspaceError(RmodError):
    """Sammelt alle Fehler beim Laden eines Workspace."""

    def __init__(self, errors: List[SourceError]):
        self.errors = list(errors)
        lines = "\n".join(str(error) for error in self.errors)
        super().__init__(f"{len(self.errors)} Fehler beim Laden des Workspace:\n{lines}")
