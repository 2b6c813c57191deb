"""
Modulausführung und dynamische Erkennung von Verhaltensänderungen.

Parent und Kind werden auf denselben Datensätzen ausgeführt; für jedes
Output-Prädikat, das in beiden Modulen konkret ist, wird die Änderung
klassifiziert (unverändert, gewachsen, geschrumpft, beides) und über
alle Datensätze per Join aggregiert.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from config.settings import DEFAULT_SETTINGS, NON_GROWABLE, NON_SHRINKABLE, EngineSettings
from modules.hierarchy import get_module, resolve
from modules.model import Hierarchy, ResolvedModule, Restriction
from rules.errors import AbstractModuleExecution, NoApplicableDatasets, NotApplicable
from rules.evaluation import evaluate
from rules.terms import Dataset, Fact, Predicate, sort_facts

logger = logging.getLogger(__name__)


# =============================================================================
# ÄNDERUNGSKLASSEN
# =============================================================================

class ChangeClass(Enum):
    """Änderung einer Faktenmenge; bildet einen Join-Halbverband."""

    UNCHANGED = "unchanged"
    GROWN = "grown"
    SHRUNK = "shrunk"
    GROWN_AND_SHRUNK = "grown_and_shrunk"

    @property
    def grew(self) -> bool:
        return self in (ChangeClass.GROWN, ChangeClass.GROWN_AND_SHRUNK)

    @property
    def shrank(self) -> bool:
        return self in (ChangeClass.SHRUNK, ChangeClass.GROWN_AND_SHRUNK)

    @classmethod
    def from_flags(cls, grew: bool, shrank: bool) -> "ChangeClass":
        if grew and shrank:
            return cls.GROWN_AND_SHRUNK
        if grew:
            return cls.GROWN
        if shrank:
            return cls.SHRUNK
        return cls.UNCHANGED

    def join(self, other: "ChangeClass") -> "ChangeClass":
        return ChangeClass.from_flags(self.grew or other.grew, self.shrank or other.shrank)

    def flipped(self) -> "ChangeClass":
        """Klasse bei vertauschten Rollen von Parent und Kind."""
        return ChangeClass.from_flags(self.shrank, self.grew)

    def __str__(self) -> str:
        return self.value


def join_all(classes: Iterable[ChangeClass]) -> ChangeClass:
    return reduce(ChangeClass.join, classes, ChangeClass.UNCHANGED)


def classify_change(parent_facts: FrozenSet[Fact], child_facts: FrozenSet[Fact]) -> ChangeClass:
    """
    Klassifiziert p^d_m' gegenüber p^d_m.

    Echte Teilmenge -> geschrumpft, echte Obermenge -> gewachsen,
    gleich -> unverändert, sonst beides.
    """
    parent_facts, child_facts = frozenset(parent_facts), frozenset(child_facts)
    return ChangeClass.from_flags(bool(child_facts - parent_facts), bool(parent_facts - child_facts))


# =============================================================================
# AUSFÜHRUNG
# =============================================================================

@dataclass(frozen=True)
class ExecutionResult:
    """p^d_m für jedes Output-Prädikat (auch leere Extensionen)."""

    module_id: str
    dataset: str
    outputs: Dict[Predicate, FrozenSet[Fact]]

    def facts(self, predicate: Predicate) -> FrozenSet[Fact]:
        return self.outputs.get(predicate, frozenset())

    @property
    def fact_count(self) -> int:
        return sum(len(facts) for facts in self.outputs.values())


def missing_inputs(d: Dataset, rm: ResolvedModule) -> FrozenSet[Predicate]:
    return rm.inputs - d.schema


def is_applicable(d: Dataset, rm: ResolvedModule) -> bool:
    """Anwendbar, wenn I_m ⊆ P_d."""
    return not missing_inputs(d, rm)


def execute(rm: ResolvedModule, d: Dataset, settings: Optional[EngineSettings] = None,
            allow_abstract: bool = False) -> ExecutionResult:
    """
    Führt ein Modul auf einem Datensatz aus.

    Nur die Extensionen der Inputprädikate werden eingespeist; das Ergebnis
    ist auf O_m eingeschränkt.

    Args:
        rm: Aufgelöstes Modul
        d: Datensatz
        settings: Engine-Einstellungen
        allow_abstract: Abstrakte Module trotzdem ausführen

    Returns:
        ExecutionResult

    Raises:
        NotApplicable: Inputprädikate fehlen im Datensatz
        AbstractModuleExecution: Modul ist abstrakt und allow_abstract=False
    """
    missing = missing_inputs(d, rm)
    if missing:
        raise NotApplicable(rm.id, d.name, missing)
    if rm.is_abstract and not allow_abstract:
        raise AbstractModuleExecution(rm.id, rm.abstract_predicates)

    model = evaluate(rm.rules, d.restrict(rm.inputs), settings or DEFAULT_SETTINGS)
    outputs = {p: model.get(p, frozenset()) for p in sorted(rm.outputs)}
    logger.debug("Modul %s auf %s: %d Output-Fakten", rm.id, d.name, sum(len(f) for f in outputs.values()))
    return ExecutionResult(rm.id, d.name, outputs)


# =============================================================================
# ERKENNUNG
# =============================================================================

@dataclass(frozen=True)
class BehaviorReport:
    """
    Ergebnis der dynamischen Erkennung für ein Paar (Parent, Kind).

    `classes` enthält die aggregierte Klasse je verglichenem Prädikat,
    `per_dataset` die Klasse je Datensatz.
    """

    parent: str
    child: str
    classes: Dict[Predicate, ChangeClass]
    per_dataset: Dict[str, Dict[Predicate, ChangeClass]]
    not_comparable: FrozenSet[Predicate]
    removed_outputs: FrozenSet[Predicate]
    datasets: Tuple[str, ...]
    undeclared_modifications: Tuple[Tuple[Predicate, ChangeClass], ...] = ()
    results: Dict[str, Tuple[ExecutionResult, ExecutionResult]] = field(default_factory=dict, compare=False, repr=False)


def _is_declared(rm: ResolvedModule, predicate: Predicate, detected: ChangeClass) -> bool:
    for intention in rm.intended:
        if intention.predicate != predicate:
            continue
        declared = ChangeClass(intention.change)
        if declared.join(detected) == declared:
            return True
    return False


def detect_behavioral_modifications(h: Hierarchy, parent_id: str, child_id: str,
                                    datasets: Sequence[Dataset],
                                    settings: Optional[EngineSettings] = None) -> BehaviorReport:
    """
    Führt Parent und Kind auf allen Datensätzen aus und klassifiziert die Änderungen.

    Verglichen werden Output-Prädikate beider Module, die in beiden konkret
    sind. Abstrakte Parents werden dafür intern trotzdem ausgeführt.

    Raises:
        NoApplicableDatasets: leere Datensatzliste
        NotApplicable: ein Datensatz passt nicht zu einem der beiden Module
    """
    if not datasets:
        raise NoApplicableDatasets(parent_id, child_id)

    parent = resolve(h, parent_id)
    child = resolve(h, child_id)
    ordered = sorted(datasets, key=lambda d: d.name)

    for d in ordered:
        for rm in (parent, child):
            missing = missing_inputs(d, rm)
            if missing:
                raise NotApplicable(rm.id, d.name, missing)

    common = parent.outputs & child.outputs
    considered = sorted(p for p in common if p in parent.concrete and p in child.concrete)

    per_dataset: Dict[str, Dict[Predicate, ChangeClass]] = {}
    results: Dict[str, Tuple[ExecutionResult, ExecutionResult]] = {}
    for d in ordered:
        parent_result = execute(parent, d, settings, allow_abstract=True)
        child_result = execute(child, d, settings, allow_abstract=True)
        results[d.name] = (parent_result, child_result)
        per_dataset[d.name] = {
            p: classify_change(parent_result.facts(p), child_result.facts(p)) for p in considered
        }

    classes = {p: join_all(per_dataset[d.name][p] for d in ordered) for p in considered}
    undeclared = tuple(
        (p, cls) for p, cls in classes.items()
        if cls is not ChangeClass.UNCHANGED and not _is_declared(child, p, cls)
    )

    logger.debug("Verhaltensvergleich %s -> %s: %s", child_id, parent_id,
                 {str(p): str(c) for p, c in classes.items()})
    return BehaviorReport(
        parent=parent_id,
        child=child_id,
        classes=classes,
        per_dataset=per_dataset,
        not_comparable=frozenset(common) - frozenset(considered),
        removed_outputs=parent.outputs - child.outputs,
        datasets=tuple(d.name for d in ordered),
        undeclared_modifications=undeclared,
        results=results,
    )


# =============================================================================
# VERHALTENSKONFORMITÄT
# =============================================================================

@dataclass(frozen=True)
class BehavioralViolation:
    """Verletzung von non_growable/non_shrinkable mit Beispiel-Datensatz."""

    child: str
    parent: str
    restriction: Restriction
    predicate: Predicate
    observed: ChangeClass
    dataset: str
    sample: Tuple[Fact, ...]

    @property
    def sort_key(self) -> Tuple[str, str, str]:
        return (self.child, str(self.predicate), self.restriction.kind)

    def __str__(self) -> str:
        return (f"{self.child} verletzt {self.restriction} von {self.parent}: "
                f"{self.predicate} ist {self.observed} (Datensatz {self.dataset})")


def behavioral_violations(report: BehaviorReport, restrictions: FrozenSet[Restriction],
                          settings: Optional[EngineSettings] = None) -> List[BehavioralViolation]:
    """Bewertet einen BehaviorReport gegen die Restriktionen des Parents."""
    settings = settings or DEFAULT_SETTINGS
    violations = []

    for restriction in sorted(restrictions, key=lambda r: r.sort_key):
        predicate = restriction.predicate
        if restriction.kind not in (NON_GROWABLE, NON_SHRINKABLE) or predicate not in report.classes:
            continue
        observed = report.classes[predicate]
        growing = restriction.kind == NON_GROWABLE
        if not (observed.grew if growing else observed.shrank):
            continue

        for name in report.datasets:
            cls = report.per_dataset[name][predicate]
            if cls.grew if growing else cls.shrank:
                parent_result, child_result = report.results[name]
                parent_facts = parent_result.facts(predicate)
                child_facts = child_result.facts(predicate)
                differing = child_facts - parent_facts if growing else parent_facts - child_facts
                sample = tuple(sort_facts(differing)[:settings.witness_sample_size])
                violations.append(BehavioralViolation(
                    report.child, report.parent, restriction, predicate, observed, name, sample,
                ))
                break

    return sorted(violations, key=lambda v: v.sort_key)


def check_behavioral(h: Hierarchy, child_id: str, datasets: Sequence[Dataset],
                     settings: Optional[EngineSettings] = None) -> List[BehavioralViolation]:
    """
    Prüft non_growable/non_shrinkable des Parents auf den gegebenen Datensätzen.

    Das Urteil gilt nur für die getesteten Datensätze.
    """
    child = get_module(h, child_id)
    if child.parent is None:
        return []
    report = detect_behavioral_modifications(h, child.parent, child_id, datasets, settings)
    return behavioral_violations(report, resolve(h, child.parent).restrictions, settings)
