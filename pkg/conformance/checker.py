"""
Orchestrierung der Konformitätsprüfung über einen Workspace.
"""

import logging
import time
from dataclasses import replace
from typing import Dict, List, Optional, Tuple

from config.settings import (
    NO_ADDITIONAL_INPUT, NO_ADDITIONAL_OUTPUT, NON_OMITABLE_INPUT, NON_OMITABLE_OUTPUT,
    EngineSettings,
)
from conformance.behavior import behavioral_violations, detect_behavioral_modifications
from conformance.report import ConformanceReport
from conformance.restrictions import (
    StructuralViolation, affected_by_restriction_change, check_structural,
)
from data.loader import Workspace
from modules.hierarchy import edges, get_module, resolve
from rules.errors import RmodError
from rules.terms import Dataset

logger = logging.getLogger(__name__)

_LOCATION_KEYS = {
    NO_ADDITIONAL_INPUT: "input+",
    NO_ADDITIONAL_OUTPUT: "output+",
    NON_OMITABLE_INPUT: "input-",
    NON_OMITABLE_OUTPUT: "output-",
}


def _locate(workspace: Workspace, violation: StructuralViolation) -> StructuralViolation:
    key = _LOCATION_KEYS[violation.restriction.kind]
    location = workspace.location(key, violation.child, str(violation.evidence[0]))
    return replace(violation, location=location or workspace.module_location(violation.child))


def check_pairs(workspace: Workspace, module_id: Optional[str] = None,
                affected: bool = False) -> List[Tuple[str, str]]:
    """
    Zu prüfende Paare (Kind, Parent).

    Ohne `module_id` alle Kanten, sonst die Kante des Moduls. Mit `affected`
    kommen die Kanten aller Nachfahren hinzu, also alles, was nach einer
    Restriktionsänderung an `module_id` neu zu prüfen ist.
    """
    h = workspace.hierarchy
    if module_id is None:
        return edges(h)
    ids = affected_by_restriction_change(h, module_id) if affected else [module_id]
    pairs = []
    for child_id in ids:
        module = get_module(h, child_id)
        if module.parent is not None:
            pairs.append((module.id, module.parent))
    return sorted(pairs)


def run_conformance_check(workspace: Workspace, module_id: Optional[str] = None,
                          structural: bool = True, behavioral: bool = True,
                          datasets: Optional[Dict[str, Dataset]] = None,
                          settings: Optional[EngineSettings] = None,
                          started: Optional[float] = None,
                          affected: bool = False) -> ConformanceReport:
    """
    Führt strukturelle und/oder Verhaltensprüfung aus.

    Args:
        workspace: Geladener Workspace
        module_id: Nur dieses Modul gegen seinen Parent prüfen (default: alle Kanten)
        structural: Strukturelle Prüfung ausführen
        behavioral: Verhaltensprüfung ausführen (braucht datasets)
        datasets: Datensätze für die Verhaltensprüfung
        settings: Engine-Einstellungen
        started: perf_counter-Zeitpunkt des Prozessstarts für total_seconds
        affected: Mit `module_id` auch alle Nachfahren prüfen

    Returns:
        ConformanceReport; Anwendbarkeitsfehler stehen in `errors`
    """
    t0 = time.perf_counter()
    h = workspace.hierarchy
    pairs = check_pairs(workspace, module_id, affected)
    behavioral = behavioral and datasets is not None

    report = ConformanceReport(
        modules=tuple(sorted({child for child, _ in pairs} | ({module_id} if module_id else set()))),
        structural=structural,
        behavioral=behavioral,
        warnings=list(workspace.warnings),
    )

    for child_id, parent_id in pairs:
        resolve(h, child_id)

        if structural:
            report.structural_violations.extend(_locate(workspace, v) for v in check_structural(h, child_id))

        if behavioral:
            try:
                behavior = detect_behavioral_modifications(
                    h, parent_id, child_id, list(datasets.values()), settings,
                )
            except RmodError as error:
                report.errors.append(f"{child_id} -> {parent_id}: {error}")
                continue
            report.behavior.append(behavior)
            report.behavioral_violations.extend(
                behavioral_violations(behavior, resolve(h, parent_id).restrictions, settings)
            )

    report.check_seconds = time.perf_counter() - t0
    if started is not None:
        report.total_seconds = time.perf_counter() - started

    logger.info(
        "Prüfung beendet: %d Paare, %d strukturelle, %d Verhaltensverletzungen, %d Fehler in %.4f s",
        len(pairs), len(report.structural_violations), len(report.behavioral_violations),
        len(report.errors), report.check_seconds,
    )
    return report
