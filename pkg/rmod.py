"""
rmod - Kommandozeile für Regelmodule.

Befehle:
    resolve   Modul mit aufgelöster Vererbung ausgeben
    info      Schnittstellen, Restriktionen und Abstraktheit anzeigen
    run       Modul auf einem Datensatz ausführen
    check     Strukturelle und Verhaltenskonformität prüfen
    generate  Synthetische Datensätze erzeugen

Exit-Codes: 0 = sauber, 1 = Verletzungen, 2 = Fehler.
"""

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import List, Optional

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
from config.settings import (
    EXIT_ERROR, EXIT_OK, EXIT_VIOLATIONS, LOG_LEVEL_ENV, REPORT_FORMATS,
    VERSION, ConfigError, EngineSettings,
)
from conformance.behavior import behavioral_violations, detect_behavioral_modifications, execute
from conformance.checker import run_conformance_check
from conformance.report import emit_report
from data.loader import Workspace, load_datasets, load_workspace, parse_dataset_file
from data.render import extensions_to_json, fact_to_json, render_facts, render_resolved
from data.synthetic import generate_datasets, write_datasets
from modules.hierarchy import get_module, resolve
from rules.errors import RmodError
from rules.terms import Dataset

logger = logging.getLogger("rmod")


# =============================================================================
# ARGUMENTE
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmod",
        description="Regelmodule mit Vererbung, abstrakten Prädikaten und Modifikationsrestriktionen.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Beispiele:
  %(prog)s resolve data/sample_data/loans --module PrivateLoanApps
  %(prog)s info data/sample_data/loans --module LoanApps
  %(prog)s run data/sample_data/loans --module MortgageApps --data two_applications
  %(prog)s check data/sample_data/loans --data data/sample_data/loans/data --format text
  %(prog)s check data/sample_data/loans --module LoanApps --affected --structural
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="Mehr Log-Ausgabe auf stderr (-v INFO, -vv DEBUG)")

    commands = parser.add_subparsers(dest="command", required=True)

    resolve_cmd = commands.add_parser("resolve", help="Aufgelöstes Modul ausgeben")
    resolve_cmd.add_argument("workspace", help="Workspace-Verzeichnis")
    resolve_cmd.add_argument("--module", required=True, help="Modul-ID")

    info_cmd = commands.add_parser("info", help="Modulinformationen anzeigen")
    info_cmd.add_argument("workspace", help="Workspace-Verzeichnis")
    info_cmd.add_argument("--module", required=True, help="Modul-ID")

    run_cmd = commands.add_parser("run", help="Modul auf einem Datensatz ausführen")
    run_cmd.add_argument("workspace", help="Workspace-Verzeichnis")
    run_cmd.add_argument("--module", required=True, help="Modul-ID")
    run_cmd.add_argument("--data", required=True, help="Datensatzname im Workspace oder Pfad zu einer .facts-Datei")
    run_cmd.add_argument("--format", choices=("facts", "json"), default="facts", help="Ausgabeformat")
    run_cmd.add_argument("--allow-abstract", action="store_true", help="Abstrakte Module trotzdem ausführen")
    run_cmd.add_argument("--conform", action="store_true",
                         help="Zusätzlich Verhalten gegen den Parent auf diesem Datensatz prüfen")

    check_cmd = commands.add_parser("check", help="Konformität prüfen")
    check_cmd.add_argument("workspace", help="Workspace-Verzeichnis")
    check_cmd.add_argument("--module", help="Nur dieses Modul gegen seinen Parent prüfen")
    check_cmd.add_argument("--affected", action="store_true",
                           help="Mit --module auch alle Nachfahren prüfen (nach Restriktionsänderungen)")
    check_cmd.add_argument("--structural", action="store_true", help="Strukturelle Prüfung")
    check_cmd.add_argument("--behavioral", action="store_true", help="Verhaltensprüfung (braucht --data)")
    check_cmd.add_argument("--data", help="Verzeichnis mit .facts-Datensätzen")
    check_cmd.add_argument("--format", choices=REPORT_FORMATS, default="json", help="Berichtsformat")
    check_cmd.add_argument("--timing", action="store_true", help="Laufzeiten in den JSON-Bericht aufnehmen")

    generate_cmd = commands.add_parser("generate", help="Synthetische Datensätze erzeugen")
    generate_cmd.add_argument("--out", required=True, help="Zielverzeichnis")
    generate_cmd.add_argument("--count", type=int, default=3, help="Anzahl Datensätze")
    generate_cmd.add_argument("--seed", type=int, default=42, help="Zufalls-Seed")
    generate_cmd.add_argument("--applications", type=int, default=12, help="Anträge je Datensatz")

    return parser


def configure_logging(verbose: int) -> None:
    """Logging auf stderr; RMOD_LOG_LEVEL als Basis, -v/-vv senken die Schwelle."""
    level_name = os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    if verbose == 1:
        level = min(level, logging.INFO)
    elif verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


# =============================================================================
# BEFEHLE
# =============================================================================

def cmd_resolve(args, settings: EngineSettings) -> int:
    workspace = load_workspace(args.workspace)
    sys.stdout.write(render_resolved(resolve(workspace.hierarchy, args.module)))
    return EXIT_OK


def _names(predicates) -> str:
    return ", ".join(str(p) for p in sorted(predicates)) or "-"


def cmd_info(args, settings: EngineSettings) -> int:
    workspace = load_workspace(args.workspace)
    module = get_module(workspace.hierarchy, args.module)
    rm = resolve(workspace.hierarchy, args.module)

    restrictions = ", ".join(str(r) for r in sorted(rm.restrictions, key=lambda r: r.sort_key)) or "-"
    lines = [
        f"module: {rm.id}",
        f"parent: {module.parent or '-'}",
        f"rules: {', '.join(rm.rule_ids) or '-'}",
        f"inputs: {_names(rm.inputs)}",
        f"outputs: {_names(rm.outputs)}",
        f"restrictions: {restrictions}",
        f"undefined predicates: {_names(rm.undefined_predicates)}",
        f"abstract predicates: {_names(rm.abstract_predicates)}",
        f"abstract: {'yes' if rm.is_abstract else 'no'}",
    ]
    print("\n".join(lines))
    return EXIT_OK


def _find_dataset(workspace: Workspace, name: str) -> Dataset:
    if name in workspace.datasets:
        return workspace.datasets[name]
    path = Path(name)
    if path.is_file():
        return parse_dataset_file(path.read_text(encoding="utf-8"), path.stem, str(path))
    raise RmodError(f"Datensatz nicht gefunden: {name}")


def cmd_run(args, settings: EngineSettings) -> int:
    workspace = load_workspace(args.workspace)
    dataset = _find_dataset(workspace, args.data)
    module = get_module(workspace.hierarchy, args.module)
    rm = resolve(workspace.hierarchy, args.module)
    result = execute(rm, dataset, settings, allow_abstract=args.allow_abstract)

    violations = []
    report = None
    if args.conform and module.parent is not None:
        report = detect_behavioral_modifications(workspace.hierarchy, module.parent, module.id, [dataset], settings)
        violations = behavioral_violations(report, resolve(workspace.hierarchy, module.parent).restrictions, settings)

    if args.format == "json":
        payload = {"module": rm.id, "dataset": dataset.name, "outputs": extensions_to_json(result.outputs)}
        if args.conform:
            payload["conformance"] = {
                "parent": module.parent,
                "classes": {str(p): c.value for p, c in sorted(report.classes.items())} if report else {},
                "violations": [
                    {
                        "restriction": str(v.restriction),
                        "predicate": str(v.predicate),
                        "observed": v.observed.value,
                        "tuples": [fact_to_json(fact) for fact in v.sample],
                    }
                    for v in violations
                ],
            }
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        sys.stdout.write(render_facts(result.outputs))
        for violation in violations:
            print(f"% {violation}")

    return EXIT_VIOLATIONS if violations else EXIT_OK


def cmd_check(args, settings: EngineSettings, started: float) -> int:
    if args.behavioral and not args.data:
        print("Fehler: --behavioral braucht --data DIR", file=sys.stderr)
        return EXIT_ERROR
    if args.affected and not args.module:
        print("Fehler: --affected braucht --module ID", file=sys.stderr)
        return EXIT_ERROR

    structural = args.structural or not args.behavioral
    behavioral = args.behavioral or (not args.structural and bool(args.data))

    workspace = load_workspace(args.workspace)
    datasets = load_datasets(args.data) if behavioral else None
    report = run_conformance_check(
        workspace,
        module_id=args.module,
        structural=structural,
        behavioral=behavioral,
        datasets=datasets,
        settings=settings,
        started=started,
        affected=args.affected,
    )
    sys.stdout.write(emit_report(report, args.format, include_timing=args.timing))
    return report.exit_code


def cmd_generate(args, settings: EngineSettings) -> int:
    datasets = generate_datasets(args.count, seed=args.seed, applications=args.applications)
    paths = write_datasets(datasets, args.out)
    for path in paths:
        print(path)
    return EXIT_OK


# =============================================================================
# EINSTIEG
# =============================================================================

def main(argv: Optional[List[str]] = None) -> int:
    started = time.perf_counter()
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    try:
        settings = EngineSettings.from_env()
        if args.command == "resolve":
            return cmd_resolve(args, settings)
        if args.command == "info":
            return cmd_info(args, settings)
        if args.command == "run":
            return cmd_run(args, settings)
        if args.command == "check":
            return cmd_check(args, settings, started)
        return cmd_generate(args, settings)
    except (RmodError, ConfigError, OSError) as error:
        print(f"Fehler: {error}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
