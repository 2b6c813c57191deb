"""
Konformitätsbericht.

Sammelt strukturelle und verhaltensbezogene Verletzungen, Warnungen,
Fehler und Laufzeiten und serialisiert sie als JSON (stabil sortiert)
oder als Text.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from config.settings import EXIT_ERROR, EXIT_OK, EXIT_VIOLATIONS, REPORT_FORMATS, VERSION, format_duration
from conformance.behavior import BehavioralViolation, BehaviorReport
from conformance.restrictions import StructuralViolation
from data.render import fact_to_json
from modules.model import Restriction


@dataclass
class ConformanceReport:
    """Ergebnis eines `rmod check`-Laufs."""

    modules: Tuple[str, ...] = ()
    structural: bool = True
    behavioral: bool = True
    structural_violations: List[StructuralViolation] = field(default_factory=list)
    behavioral_violations: List[BehavioralViolation] = field(default_factory=list)
    behavior: List[BehaviorReport] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    check_seconds: float = 0.0
    total_seconds: Optional[float] = None

    def __post_init__(self):
        if self.check_seconds < 0:
            raise ValueError("check_seconds muss >= 0 sein")

    @property
    def violation_count(self) -> int:
        return len(self.structural_violations) + len(self.behavioral_violations)

    @property
    def exit_code(self) -> int:
        if self.errors:
            return EXIT_ERROR
        if self.violation_count:
            return EXIT_VIOLATIONS
        return EXIT_OK


# =============================================================================
# JSON
# =============================================================================

def _restriction_dict(restriction: Restriction) -> Dict[str, Any]:
    return {
        "kind": restriction.kind,
        "predicate": str(restriction.predicate) if restriction.predicate else None,
    }


def report_to_dict(report: ConformanceReport, include_timing: bool = False) -> Dict[str, Any]:
    """
    Stabil geordnete Dict-Darstellung (Schema: docs/report_schema.md).

    Ohne include_timing bleiben die Laufzeitfelder `null`, damit der
    Bericht pro Workspace byte-identisch ist.
    """
    structural = sorted(report.structural_violations, key=lambda v: v.sort_key)
    behavioral = sorted(report.behavioral_violations, key=lambda v: v.sort_key)
    behavior = sorted(report.behavior, key=lambda b: (b.child, b.parent))

    return {
        "tool": "rmod",
        "version": VERSION,
        "modules": sorted(report.modules),
        "checks": {"structural": report.structural, "behavioral": report.behavioral},
        "structural_violations": [
            {
                "child": v.child,
                "parent": v.parent,
                "restriction": _restriction_dict(v.restriction),
                "evidence": [str(p) for p in v.evidence],
                "location": str(v.location) if v.location else None,
            }
            for v in structural
        ],
        "behavioral_violations": [
            {
                "child": v.child,
                "parent": v.parent,
                "restriction": _restriction_dict(v.restriction),
                "predicate": str(v.predicate),
                "observed": v.observed.value,
                "witness": {
                    "dataset": v.dataset,
                    "tuples": [fact_to_json(fact) for fact in v.sample],
                },
            }
            for v in behavioral
        ],
        "behavior": [
            {
                "child": b.child,
                "parent": b.parent,
                "datasets": list(b.datasets),
                "classes": {str(p): c.value for p, c in sorted(b.classes.items())},
                "not_comparable": sorted(str(p) for p in b.not_comparable),
                "removed_outputs": sorted(str(p) for p in b.removed_outputs),
                "undeclared_modifications": [
                    {"predicate": str(p), "change": c.value} for p, c in b.undeclared_modifications
                ],
            }
            for b in behavior
        ],
        "warnings": sorted(report.warnings),
        "errors": sorted(report.errors),
        "timing": {
            "check_seconds": round(report.check_seconds, 6) if include_timing else None,
            "total_seconds": round(report.total_seconds, 6)
            if include_timing and report.total_seconds is not None else None,
        },
        "summary": {
            "structural": len(structural),
            "behavioral": len(behavioral),
            "errors": len(report.errors),
            "exit_code": report.exit_code,
        },
    }


# =============================================================================
# TEXT
# =============================================================================

def _table(rows: List[Dict[str, Any]]) -> str:
    return pd.DataFrame(rows).to_string(index=False)


def report_to_text(report: ConformanceReport) -> str:
    """Menschenlesbarer Bericht mit Dateipositionen."""
    lines = [f"rmod {VERSION} - Konformitätsprüfung", ""]
    lines.append(f"Geprüfte Module: {', '.join(sorted(report.modules)) or '-'}")
    lines.append("")

    lines.append(f"Strukturelle Verletzungen: {len(report.structural_violations)}")
    if report.structural_violations:
        lines.append(_table([
            {
                "Position": str(v.location) if v.location else "-",
                "Kind": v.child,
                "Parent": v.parent,
                "Restriktion": str(v.restriction),
                "Evidenz": ", ".join(str(p) for p in v.evidence),
            }
            for v in sorted(report.structural_violations, key=lambda v: v.sort_key)
        ]))
    lines.append("")

    lines.append(f"Verhaltensverletzungen: {len(report.behavioral_violations)}")
    if report.behavioral_violations:
        lines.append(_table([
            {
                "Kind": v.child,
                "Parent": v.parent,
                "Restriktion": str(v.restriction),
                "Beobachtet": v.observed.value,
                "Datensatz": v.dataset,
                "Beispiele": "; ".join("(" + ", ".join(str(c) for c in fact) + ")" for fact in v.sample),
            }
            for v in sorted(report.behavioral_violations, key=lambda v: v.sort_key)
        ]))
    lines.append("")

    if report.behavior:
        lines.append("Änderungsklassen:")
        rows = [
            {"Kind": b.child, "Parent": b.parent, "Prädikat": str(p), "Klasse": c.value}
            for b in sorted(report.behavior, key=lambda b: (b.child, b.parent))
            for p, c in sorted(b.classes.items())
        ]
        if rows:
            lines.append(_table(rows))
        for b in sorted(report.behavior, key=lambda b: (b.child, b.parent)):
            if b.not_comparable:
                names = ", ".join(sorted(str(p) for p in b.not_comparable))
                lines.append(f"  {b.child} -> {b.parent} nicht vergleichbar: {names}")
            if b.removed_outputs:
                names = ", ".join(sorted(str(p) for p in b.removed_outputs))
                lines.append(f"  {b.child} -> {b.parent} entfernte Outputs: {names}")
            for p, c in b.undeclared_modifications:
                lines.append(f"  {b.child}: nicht deklarierte Änderung {p} {c.value}")
            lines.append(f"  Datensätze {b.child} -> {b.parent}: {', '.join(b.datasets)}")
        lines.append("")

    for warning in sorted(report.warnings):
        lines.append(f"Warnung: {warning}")
    for error in sorted(report.errors):
        lines.append(f"Fehler: {error}")

    lines.append(f"check_seconds: {report.check_seconds:.6f} ({format_duration(report.check_seconds)})")
    total = report.total_seconds
    lines.append(f"total_seconds: {total:.6f} ({format_duration(total)})" if total is not None else "total_seconds: -")
    return "\n".join(lines) + "\n"


def emit_report(report: ConformanceReport, fmt: str = "json", include_timing: bool = False) -> str:
    """
    Serialisiert einen Bericht.

    Args:
        report: ConformanceReport
        fmt: 'json' oder 'text'
        include_timing: Laufzeiten in JSON ausgeben

    Returns:
        Text mit abschließendem Zeilenumbruch
    """
    if fmt not in REPORT_FORMATS:
        raise ValueError(f"Unbekanntes Format: {fmt}")
    if fmt == "text":
        return report_to_text(report)
    return json.dumps(report_to_dict(report, include_timing), indent=2, ensure_ascii=False) + "\n"
