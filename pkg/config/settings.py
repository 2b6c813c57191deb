"""
rmod - Globale Einstellungen und Konstanten

Restriktionsarten, Änderungsklassen, Exit-Codes, Engine-Limits und die
Farbpalette für das Dashboard.
"""

import os
from dataclasses import dataclass
from typing import Dict, Optional

VERSION = "0.4.0"

# =============================================================================
# DATEIEN
# =============================================================================

MODULE_SUFFIX = ".rmod"
DATASET_SUFFIX = ".facts"

SAMPLE_WORKSPACE_PATH = "data/sample_data/loans"
SAMPLE_DATASETS_PATH = "data/sample_data/loans/data"

# =============================================================================
# MODIFIKATIONSRESTRIKTIONEN
# =============================================================================

NO_ADDITIONAL_INPUT = "no_additional_input"
NO_ADDITIONAL_OUTPUT = "no_additional_output"
NON_OMITABLE_INPUT = "non_omitable_input"
NON_OMITABLE_OUTPUT = "non_omitable_output"
NON_GROWABLE = "non_growable"
NON_SHRINKABLE = "non_shrinkable"

# Restriktionen ohne Prädikat
GLOBAL_RESTRICTIONS = (NO_ADDITIONAL_INPUT, NO_ADDITIONAL_OUTPUT)

# Restriktionen mit Prädikat -> Seite der Schnittstelle, auf der p liegen muss
PREDICATE_RESTRICTIONS: Dict[str, str] = {
    NON_OMITABLE_INPUT: "input",
    NON_OMITABLE_OUTPUT: "output",
    NON_GROWABLE: "output",
    NON_SHRINKABLE: "output",
}

RESTRICTION_KINDS = GLOBAL_RESTRICTIONS + tuple(PREDICATE_RESTRICTIONS)

STRUCTURAL_KINDS = (NO_ADDITIONAL_INPUT, NON_OMITABLE_INPUT, NO_ADDITIONAL_OUTPUT, NON_OMITABLE_OUTPUT)
BEHAVIORAL_KINDS = (NON_GROWABLE, NON_SHRINKABLE)

# =============================================================================
# ÄNDERUNGSKLASSEN (dynamische Erkennung)
# =============================================================================

UNCHANGED = "unchanged"
GROWN = "grown"
SHRUNK = "shrunk"
GROWN_AND_SHRUNK = "grown_and_shrunk"

CHANGE_CLASSES = (UNCHANGED, GROWN, SHRUNK, GROWN_AND_SHRUNK)

# =============================================================================
# EXIT-CODES
# =============================================================================

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_ERROR = 2

REPORT_FORMATS = ("json", "text")

# =============================================================================
# ENGINE
# =============================================================================

DERIVATION_CAP_ENV = "RMOD_DERIVATION_CAP"
LOG_LEVEL_ENV = "RMOD_LOG_LEVEL"


class ConfigError(ValueError):
    """Ungültige Konfiguration (z.B. Umgebungsvariable)."""


@dataclass(frozen=True)
class EngineSettings:
    """Parameter für Auswertung und Konformitätsprüfung."""

    # Maximale Anzahl abgeleiteter Fakten pro Auswertung
    derivation_cap: int = 1_000_000

    # Maximale Anzahl Beispiel-Tupel je Verhaltensverletzung
    witness_sample_size: int = 5

    def __post_init__(self):
        """Validiert die Werte."""
        if self.derivation_cap <= 0:
            raise ConfigError(f"derivation_cap muss positiv sein: {self.derivation_cap}")
        if self.witness_sample_size <= 0:
            raise ConfigError(f"witness_sample_size muss positiv sein: {self.witness_sample_size}")

    @classmethod
    def from_env(cls, environ: Optional[Dict[str, str]] = None) -> "EngineSettings":
        """
        Liest Overrides aus der Umgebung.

        Args:
            environ: Umgebung (default: os.environ)

        Returns:
            EngineSettings mit ggf. überschriebenem Ableitungslimit

        Raises:
            ConfigError: Wenn RMOD_DERIVATION_CAP keine positive Ganzzahl ist
        """
        if environ is None:
            environ = os.environ

        raw = environ.get(DERIVATION_CAP_ENV)
        if raw is None or raw.strip() == "":
            return cls()

        try:
            cap = int(raw.strip())
        except ValueError:
            raise ConfigError(f"{DERIVATION_CAP_ENV} ist keine Ganzzahl: {raw!r}")

        return cls(derivation_cap=cap)


DEFAULT_SETTINGS = EngineSettings()

# =============================================================================
# FARBPALETTE (Dashboard)
# =============================================================================

COLORS = {
    "background": "#FFFFFF",
    "card_bg": "#F5F5F5",
    "card_border": "#BEBEBE",

    "text_primary": "#757575",
    "text_secondary": "#A9A9A9",
    "text_muted": "#BEBEBE",

    "accent_blue": "#0088DE",
    "accent_blue_light": "#00B9FC",
    "accent_red": "#E94D3A",
    "accent_amber": "#f59e0b",
    "accent_green": "#10b981",

    "status_good": "#10b981",
    "status_warning": "#f59e0b",
    "status_critical": "#E94D3A",

    # Abstrakte/konkrete Module
    "module_abstract": "#A9A9A9",
    "module_concrete": "#0088DE",
}

# Farben je Änderungsklasse (Heatmap)
CHANGE_CLASS_COLORS = {
    UNCHANGED: "#F5F5F5",
    GROWN: "#00B9FC",
    SHRUNK: "#f59e0b",
    GROWN_AND_SHRUNK: "#E94D3A",
}

# =============================================================================
# UI KONFIGURATION
# =============================================================================

PAGE_CONFIG = {
    "page_title": "rmod",
    "page_icon": "🧩",
    "layout": "wide",
    "initial_sidebar_state": "expanded",
}

KPI_CARD_HEIGHT = 140  # px

CHART_HEIGHTS = {
    "small": 250,
    "medium": 350,
    "large": 450,
}

# =============================================================================
# FORMATIERUNG
# =============================================================================

def format_duration(seconds: Optional[float]) -> str:
    """Formatiert eine Laufzeit in Sekunden bzw. Millisekunden."""
    if seconds is None:
        return "-"
    if seconds < 1:
        return f"{seconds * 1000:.1f} ms"
    return f"{seconds:.3f} s"


def get_status_color(violations: int, errors: int = 0) -> str:
    """Ermittelt Status-Farbe für Prüfergebnisse."""
    if errors > 0:
        return COLORS["status_critical"]
    if violations > 0:
        return COLORS["status_warning"]
    return COLORS["status_good"]
