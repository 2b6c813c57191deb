"""
Synthetische Testdaten-Generierung für rmod.

Erzeugt Kreditportfolios, die alle Inputs der Beispielmodule abdecken
(LoanApps, MortgageApps, PrivateLoanApps):
- Klein- und Großkredite mit Laufzeiten
- Kundinnen und Kunden mit Monatseinkommen
- Immobilien (inkl. Teilobjekte) als Sicherheiten für Großkredite
"""

import logging
import os
import sys
from pathlib import Path
from typing import Dict, List, Set, Tuple

import numpy as np
from faker import Faker

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config.settings import DATASET_SUFFIX
from data.render import render_facts
from rules.terms import Constant, Dataset, Predicate, number, string, symbol

logger = logging.getLogger(__name__)


# =============================================================================
# VERTEILUNGEN
# =============================================================================

# Anteil Kleinkredite (unter 20.000)
SMALL_LOAN_SHARE = 0.45
SMALL_LOAN_RANGE = (4000, 20000)
LARGE_LOAN_RANGE = (50000, 400000)

# Laufzeiten in Monaten
DURATION_DISTRIBUTION = {
    12: 0.15,
    24: 0.20,
    36: 0.15,
    60: 0.15,
    120: 0.10,
    240: 0.15,
    300: 0.10,
}

# Monatseinkommen (Lognormal, gerundet auf 50)
INCOME_MEDIAN = 2400
INCOME_SIGMA = 0.6

# Großkredite mit Immobilie als Sicherheit
PROPERTY_RATE = 0.8
PROPERTY_VALUE_FACTOR = (0.5, 1.4)
PART_RATE = 0.3
PART_VALUE_RANGE = (5000, 60000)

PREDICATES = {
    "loan": Predicate("loan", 1),
    "lValue": Predicate("lValue", 2),
    "duration": Predicate("duration", 2),
    "customer": Predicate("customer", 2),
    "income": Predicate("income", 2),
    "mProperty": Predicate("mProperty", 2),
    "pValue": Predicate("pValue", 2),
    "hasPart": Predicate("hasPart", 2),
}


# =============================================================================
# HILFSFUNKTIONEN
# =============================================================================

def _rounded(value: float, step: int) -> int:
    return int(max(step, round(value / step) * step))


def _weighted_choice(rng: np.random.Generator, choices: Dict[int, float]) -> int:
    items = list(choices.keys())
    weights = np.array(list(choices.values()))
    return int(rng.choice(items, p=weights / weights.sum()))


def generate_portfolio(name: str, applications: int, rng: np.random.Generator, fake: Faker) -> Dataset:
    """
    Erzeugt einen Datensatz mit `applications` Kreditanträgen.

    Args:
        name: Datensatzname
        applications: Anzahl Anträge
        rng: numpy Generator
        fake: Faker-Instanz (für Kundennamen)

    Returns:
        Dataset mit Fakten für alle acht Inputprädikate
    """
    facts: Dict[str, Set[Tuple[Constant, ...]]] = {key: set() for key in PREDICATES}
    fake.unique.clear()
    property_count = 0

    for i in range(1, applications + 1):
        loan = symbol(f"l{i}")
        # l1 immer als Großkredit mit Immobilie und Teilobjekt: jedes Inputprädikat hat Fakten
        anchor = i == 1
        if not anchor and rng.random() < SMALL_LOAN_SHARE:
            value = _rounded(rng.uniform(*SMALL_LOAN_RANGE), 500)
        else:
            value = _rounded(rng.uniform(*LARGE_LOAN_RANGE), 1000)

        customer = string(fake.unique.name())
        income = _rounded(rng.lognormal(np.log(INCOME_MEDIAN), INCOME_SIGMA), 50)

        facts["loan"].add((loan,))
        facts["lValue"].add((loan, number(value)))
        facts["duration"].add((loan, number(_weighted_choice(rng, DURATION_DISTRIBUTION))))
        facts["customer"].add((loan, customer))
        facts["income"].add((customer, number(income)))

        if anchor or (value >= LARGE_LOAN_RANGE[0] and rng.random() < PROPERTY_RATE):
            property_count += 1
            prop = symbol(f"p{property_count}")
            prop_value = _rounded(value * rng.uniform(*PROPERTY_VALUE_FACTOR), 1000)
            facts["mProperty"].add((loan, prop))
            facts["pValue"].add((prop, number(prop_value)))

            if anchor or rng.random() < PART_RATE:
                property_count += 1
                part = symbol(f"p{property_count}")
                facts["hasPart"].add((prop, part))
                facts["pValue"].add((part, number(_rounded(rng.uniform(*PART_VALUE_RANGE), 1000))))

    return Dataset(name, {PREDICATES[key]: values for key, values in facts.items()})


def generate_datasets(count: int = 3, seed: int = 42, applications: int = 12) -> List[Dataset]:
    """
    Erzeugt reproduzierbare synthetische Portfolios.

    Args:
        count: Anzahl Datensätze
        seed: Seed für numpy und Faker
        applications: Anträge je Datensatz

    Returns:
        Liste von Datasets `synthetic_01`, `synthetic_02`, ...
    """
    if count < 1 or applications < 1:
        raise ValueError("count und applications müssen positiv sein")

    rng = np.random.default_rng(seed)
    fake = Faker("de_AT")
    fake.seed_instance(seed)

    datasets = [
        generate_portfolio(f"synthetic_{i:02d}", applications, rng, fake)
        for i in range(1, count + 1)
    ]
    logger.info("%d synthetische Datensätze erzeugt (seed=%d)", count, seed)
    return datasets


def write_datasets(datasets: List[Dataset], out_dir: str) -> List[str]:
    """
    Schreibt Datensätze als .facts-Dateien.

    Returns:
        Liste der geschriebenen Pfade
    """
    target = Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    paths = []
    for dataset in datasets:
        path = target / f"{dataset.name}{DATASET_SUFFIX}"
        path.write_text(f"% Synthetisches Portfolio {dataset.name}\n" + render_facts(dataset.extensions),
                        encoding="utf-8")
        paths.append(str(path))
    return paths


# =============================================================================
# MAIN (für direkten Aufruf)
# =============================================================================

if __name__ == "__main__":
    print("=" * 60)
    print("rmod - Synthetische Kreditportfolios")
    print("=" * 60)

    data = generate_datasets(count=3, seed=42)
    for written in write_datasets(data, "data/sample_data/synthetic"):
        print(f"Gespeichert: {written}")
