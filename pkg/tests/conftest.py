"""
Gemeinsame Fixtures: Beispiel-Workspace (Kreditanträge) und Mutanten.

Mutanten liegen als Overlay-Verzeichnisse unter tests/fixtures/mutants/;
ihre Dateien ersetzen bzw. ergänzen die Moduldateien einer Kopie des
Beispiel-Workspace in tmp_path.
"""

import os
import shutil
import sys
from pathlib import Path

import pytest

# Import aus dem Repository-Root
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config.settings import SAMPLE_DATASETS_PATH, SAMPLE_WORKSPACE_PATH
from data.loader import load_datasets, load_workspace

ROOT = Path(__file__).resolve().parent.parent
SAMPLE_WORKSPACE = ROOT / SAMPLE_WORKSPACE_PATH
SAMPLE_DATASETS = ROOT / SAMPLE_DATASETS_PATH
MUTANTS = Path(__file__).resolve().parent / "fixtures" / "mutants"
GOLDEN_REPORT = Path(__file__).resolve().parent / "fixtures" / "golden_report.json"


@pytest.fixture(scope="session")
def loans():
    """Geladener Beispiel-Workspace (nur lesend verwenden)."""
    return load_workspace(SAMPLE_WORKSPACE)


@pytest.fixture(scope="session")
def loan_datasets():
    return load_datasets(SAMPLE_DATASETS)


@pytest.fixture
def workspace_copy(tmp_path):
    """Kopie des Beispiel-Workspace in tmp_path."""
    target = tmp_path / "loans"
    shutil.copytree(SAMPLE_WORKSPACE, target)
    return target


@pytest.fixture
def mutant(tmp_path):
    """
    Factory: Workspace-Kopie mit Overlay eines Mutanten.

    Returns:
        Funktion name -> Pfad des Workspace
    """
    def build(name: str) -> Path:
        target = tmp_path / name
        shutil.copytree(SAMPLE_WORKSPACE, target)
        for file in sorted((MUTANTS / name).iterdir()):
            shutil.copy(file, target / file.name)
        return target

    return build


def write_module(directory: Path, module_id: str, text: str) -> Path:
    """Schreibt eine Moduldatei `<module_id>.rmod`."""
    path = directory / f"{module_id}.rmod"
    path.write_text(text, encoding="utf-8")
    return path
