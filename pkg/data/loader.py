"""
Workspace-Loader für rmod.

Liest Moduldateien (*.rmod) und Datensätze (*.facts) aus Verzeichnissen,
baut die Hierarchie und validiert sie. Alle Fehler werden mit Datei,
Zeile und Spalte gesammelt und gemeinsam als WorkspaceError gemeldet.
"""

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from config.settings import DATASET_SUFFIX, MODULE_SUFFIX
from conformance.restrictions import validate_restrictions
from modules.hierarchy import (
    AddRemoveConflict, UnknownParent, abstract_leaves, resolve, validate_hierarchy,
)
from modules.model import Hierarchy, IntendedModification, Restriction, RuleModule
from rules.analysis import check_safety, stratify
from rules.errors import (
    DeclarationError, DuplicateRuleId, InterfaceOverlap, ModelError, NotStratifiable,
    RemovedInterfaceNotInherited, RemovedRuleNotInherited, SourceError, SourceLocation,
    WorkspaceError,
)
from rules.parser import parse_facts, parse_module_tree
from rules.terms import Dataset, Predicate

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]
LocationKey = Tuple[str, ...]


# =============================================================================
# WORKSPACE
# =============================================================================

@dataclass
class Workspace:
    """
    Geladener Workspace: Hierarchie, Datensätze und Quellpositionen.

    Positionen sind nach (Art, Modul[, Element]) geschlüsselt, z.B.
    ("rule-", "PrivateLoanApps", "R0") oder ("input+", "MortgageApps", "mProperty/2").
    """

    root: str
    hierarchy: Hierarchy
    datasets: Dict[str, Dataset] = field(default_factory=dict)
    locations: Dict[LocationKey, SourceLocation] = field(default_factory=dict, compare=False, repr=False)
    warnings: List[str] = field(default_factory=list, compare=False)

    @property
    def modules(self) -> Dict[str, RuleModule]:
        return self.hierarchy.modules

    def location(self, *key: str) -> Optional[SourceLocation]:
        return self.locations.get(tuple(key))

    def module_location(self, module_id: str) -> Optional[SourceLocation]:
        return self.locations.get(("module", module_id))


# =============================================================================
# MODULDATEIEN
# =============================================================================

def _location(path: str, positioned) -> SourceLocation:
    return SourceLocation(path, positioned.line, positioned.column)


def _read_module(text: str, path: str) -> Tuple[RuleModule, Dict[LocationKey, SourceLocation]]:
    tree = parse_module_tree(text, path)
    module_id = tree["id"].value
    locations: Dict[LocationKey, SourceLocation] = {("module", module_id): _location(path, tree["id"])}
    if tree["parent"] is not None:
        locations[("parent", module_id)] = _location(path, tree["parent"])

    interfaces: Dict[str, set] = {key: set() for key in ("input+", "input-", "output+", "output-")}
    restrictions = set()
    intended = set()
    rules_added = []
    rules_removed = set()

    for kind, entries in tree["sections"]:
        if kind in ("input", "output"):
            for op, positioned in entries:
                key = f"{kind}{'+' if op == 'add' else '-'}"
                other = f"{kind}{'-' if op == 'add' else '+'}"
                predicate = positioned.value
                location = _location(path, positioned)
                if predicate in interfaces[key]:
                    raise DeclarationError(f"{predicate} ist in {kind} doppelt deklariert", location)
                if predicate in interfaces[other]:
                    raise DeclarationError(f"{predicate} wird in {kind} zugleich hinzugefügt und entfernt", location)
                interfaces[key].add(predicate)
                locations[(key, module_id, str(predicate))] = location

        elif kind == "restrict":
            for positioned in entries:
                entry_type, name, predicate = positioned.value
                location = _location(path, positioned)
                try:
                    if entry_type == "intend":
                        intention = IntendedModification(name, predicate)
                        intended.add(intention)
                        locations[("intend", module_id, str(intention))] = location
                    else:
                        restriction = Restriction(name, predicate)
                        restrictions.add(restriction)
                        locations[("restriction", module_id, str(restriction))] = location
                except ValueError as e:
                    raise DeclarationError(str(e), location)

        elif kind == "rules":
            for op, positioned in entries:
                location = _location(path, positioned)
                if op == "remove":
                    rules_removed.add(positioned.value)
                    locations[("rule-", module_id, positioned.value)] = location
                    continue
                rule = positioned.value
                try:
                    check_safety(rule)
                except SourceError as error:
                    raise error.at(location)
                if any(existing.id == rule.id for existing in rules_added):
                    raise DeclarationError(str(DuplicateRuleId(module_id, rule.id)), location)
                rules_added.append(rule)
                locations[("rule+", module_id, rule.id)] = location

    module = RuleModule(
        id=module_id,
        parent=tree["parent"].value if tree["parent"] is not None else None,
        rules_added=tuple(rules_added),
        rules_removed=frozenset(rules_removed),
        inputs_added=frozenset(interfaces["input+"]),
        inputs_removed=frozenset(interfaces["input-"]),
        outputs_added=frozenset(interfaces["output+"]),
        outputs_removed=frozenset(interfaces["output-"]),
        restrictions_added=frozenset(restrictions),
        intended=frozenset(intended),
    )
    return module, locations


def parse_module_file(text: str, path: str = "<input>") -> RuleModule:
    """
    Parst eine Moduldatei.

    Args:
        text: Inhalt der Datei
        path: Dateiname für Fehlermeldungen

    Returns:
        RuleModule in Deltaform

    Raises:
        RuleSyntaxError, SafetyError, DeclarationError (mit Position)
    """
    module, _ = _read_module(text, path)
    return module


# =============================================================================
# DATENSÄTZE
# =============================================================================

def parse_dataset_file(text: str, name: str, path: str = "<input>") -> Dataset:
    """
    Parst eine Faktendatei.

    Raises:
        RuleSyntaxError: Syntaxfehler
        DeclarationError: Prädikatname mit wechselnder Stelligkeit
    """
    arities: Dict[str, int] = {}
    extensions: Dict[Predicate, set] = {}
    for predicate, fact, location in parse_facts(text, path):
        known = arities.setdefault(predicate.name, predicate.arity)
        if known != predicate.arity:
            raise DeclarationError(
                f"Stelligkeit {predicate.arity} von {predicate.name} passt nicht zu früheren Fakten ({known})",
                location,
            )
        extensions.setdefault(predicate, set()).add(fact)
    return Dataset(name, extensions)


def _discover(paths: Iterable[PathLike], suffixes: Sequence[str]) -> Tuple[List[Tuple[Path, str]], List[SourceError]]:
    """Findet Dateien rekursiv; liefert (Datei, Anzeigepfad), sortiert nach Anzeigepfad."""
    found: List[Tuple[Path, str]] = []
    errors: List[SourceError] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            for file in path.rglob("*"):
                if file.is_file() and file.suffix in suffixes:
                    found.append((file, file.relative_to(path).as_posix()))
        elif path.is_file():
            found.append((path, path.name))
        else:
            errors.append(SourceError(f"Pfad nicht gefunden: {raw}"))
    found.sort(key=lambda item: (item[1], str(item[0])))
    return found, errors


def load_datasets(paths: Union[PathLike, Iterable[PathLike]]) -> Dict[str, Dataset]:
    """
    Lädt alle *.facts-Dateien; Datensatzname = Dateistamm.

    Raises:
        WorkspaceError: gesammelte Fehler mit Positionen
    """
    if isinstance(paths, (str, os.PathLike)):
        paths = [paths]
    files, errors = _discover(paths, (DATASET_SUFFIX,))
    datasets: Dict[str, Dataset] = {}
    origin: Dict[str, str] = {}
    for file, display in files:
        name = file.stem
        if name in datasets:
            errors.append(DeclarationError(
                f"Datensatz {name} bereits in {origin[name]} definiert", SourceLocation(display, 1, 1),
            ))
            continue
        try:
            datasets[name] = parse_dataset_file(file.read_text(encoding="utf-8"), name, display)
            origin[name] = display
        except SourceError as error:
            errors.append(error)
    if errors:
        raise WorkspaceError(errors)
    return dict(sorted(datasets.items()))


# =============================================================================
# WORKSPACE LADEN
# =============================================================================

def _model_error_location(error: ModelError, locations: Dict[LocationKey, SourceLocation]) -> Optional[SourceLocation]:
    if isinstance(error, RemovedRuleNotInherited):
        key = ("rule-", error.module_id, error.rule_id)
    elif isinstance(error, DuplicateRuleId):
        key = ("rule+", error.module_id, error.rule_id)
    elif isinstance(error, RemovedInterfaceNotInherited):
        key = (f"{error.side.lower()}-", error.module_id, str(error.predicate))
    elif isinstance(error, InterfaceOverlap):
        key = ("module", error.module_id)
    else:
        return None
    return locations.get(key) or locations.get(("module", error.module_id))


def _issue_location(issue, locations: Dict[LocationKey, SourceLocation]) -> Optional[SourceLocation]:
    if isinstance(issue, UnknownParent):
        return locations.get(("parent", issue.module_id))
    if isinstance(issue, AddRemoveConflict):
        return locations.get(("rule-", issue.module_id, issue.rule_id))
    return locations.get(("module", issue.module_id))


def load_workspace(paths: Union[PathLike, Iterable[PathLike]]) -> Workspace:
    """
    Lädt einen Workspace aus einem oder mehreren Verzeichnissen.

    Parst alle Modul- und Faktendateien, validiert Hierarchie, Auflösung,
    Stratifizierbarkeit und Restriktionsziele und berechnet Warnungen für
    abstrakte Blattmodule.

    Args:
        paths: Verzeichnis(se) oder Datei(en)

    Returns:
        Workspace

    Raises:
        WorkspaceError: alle gefundenen Fehler mit Datei, Zeile und Spalte
    """
    if isinstance(paths, (str, os.PathLike)):
        paths = [paths]
    paths = list(paths)
    root = str(paths[0]) if paths else "."

    files, errors = _discover(paths, (MODULE_SUFFIX, DATASET_SUFFIX))
    hierarchy = Hierarchy()
    locations: Dict[LocationKey, SourceLocation] = {}
    dataset_files = []

    for file, display in files:
        if file.suffix == DATASET_SUFFIX:
            dataset_files.append((file, display))
            continue
        try:
            module, module_locations = _read_module(file.read_text(encoding="utf-8"), display)
        except SourceError as error:
            errors.append(error)
            continue

        module_location = module_locations[("module", module.id)]
        if module.id in hierarchy:
            first = locations[("module", module.id)]
            errors.append(DeclarationError(f"Modul {module.id} bereits in {first.path} deklariert", module_location))
            continue
        if file.stem != module.id:
            errors.append(DeclarationError(
                f"Dateiname {file.name} passt nicht zu Modul {module.id} (erwartet {module.id}{MODULE_SUFFIX})",
                module_location,
            ))
            continue
        hierarchy.add(module)
        locations.update(module_locations)

    datasets: Dict[str, Dataset] = {}
    for file, display in dataset_files:
        name = file.stem
        if name in datasets:
            errors.append(DeclarationError(f"Datensatz {name} doppelt definiert", SourceLocation(display, 1, 1)))
            continue
        try:
            datasets[name] = parse_dataset_file(file.read_text(encoding="utf-8"), name, display)
        except SourceError as error:
            errors.append(error)

    if errors:
        raise WorkspaceError(errors)

    issues = validate_hierarchy(hierarchy)
    if issues:
        raise WorkspaceError([SourceError(str(issue), _issue_location(issue, locations)) for issue in issues])

    seen = set()
    for module_id in hierarchy.ids:
        try:
            resolved = resolve(hierarchy, module_id)
            stratify(resolved.rules)
        except ModelError as error:
            if str(error) not in seen:
                seen.add(str(error))
                errors.append(SourceError(str(error), _model_error_location(error, locations)))
            continue
        except NotStratifiable as error:
            errors.append(SourceError(f"Modul {module_id}: {error}", locations.get(("module", module_id))))
            continue

        for missing in validate_restrictions(hierarchy, module_id):
            key = ("restriction", module_id, str(missing.restriction))
            errors.append(SourceError(str(missing), locations.get(key)))

    if errors:
        raise WorkspaceError(errors)

    warnings = []
    for module_id in abstract_leaves(hierarchy):
        abstract = ", ".join(str(p) for p in sorted(resolve(hierarchy, module_id).abstract_predicates))
        message = f"Blattmodul {module_id} ist abstrakt (abstrakte Prädikate: {abstract})"
        logger.warning(message)
        warnings.append(message)

    logger.info("Workspace %s geladen: %d Module, %d Datensätze", root, len(hierarchy), len(datasets))
    return Workspace(
        root=root,
        hierarchy=hierarchy,
        datasets=dict(sorted(datasets.items())),
        locations=locations,
        warnings=warnings,
    )
