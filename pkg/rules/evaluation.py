"""
Bottom-up-Auswertung (semi-naiv, stratifiziert).

Materialisiert das stratifizierte kleinste Modell einer Regelmenge über
einem Datensatz. Vergleiche und Arithmetik rechnen exakt mit Fraction.
"""

import logging
import operator
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from config.settings import DEFAULT_SETTINGS, EngineSettings
from rules.analysis import check_safety, stratify
from rules.errors import DerivationCapExceeded
from rules.terms import (
    TRUE, Assignment, Atom, BinaryOp, Comparison, Constant, Dataset, Expression,
    Fact, Negate, Negation, Predicate, Rule, Variable,
)

logger = logging.getLogger(__name__)

Binding = Dict[Variable, Constant]
Model = Dict[Predicate, FrozenSet[Fact]]


# =============================================================================
# RELATIONEN
# =============================================================================

class Relation:
    """Faktenmenge eines Prädikats mit Hash-Indizes je gebundener Positionsmenge."""

    def __init__(self, facts: Iterable[Fact] = ()):
        self.facts: Set[Fact] = set(facts)
        self._indexes: Dict[Tuple[int, ...], Dict[Tuple[Constant, ...], List[Fact]]] = {}

    def __len__(self) -> int:
        return len(self.facts)

    def __contains__(self, fact: Fact) -> bool:
        return fact in self.facts

    def add_all(self, facts: Iterable[Fact]) -> None:
        self.facts.update(facts)
        self._indexes.clear()

    def lookup(self, positions: Tuple[int, ...], key: Tuple[Constant, ...]) -> Iterable[Fact]:
        if not positions:
            return self.facts
        index = self._indexes.get(positions)
        if index is None:
            index = {}
            for fact in self.facts:
                index.setdefault(tuple(fact[i] for i in positions), []).append(fact)
            self._indexes[positions] = index
        return index.get(key, ())


# =============================================================================
# BUILTINS
# =============================================================================

_ARITHMETIC = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": operator.truediv,
}

_ORDERING = {
    "<": operator.lt,
    "<=": operator.le,
    ">=": operator.ge,
    ">": operator.gt,
}


def _resolve(term, binding: Binding) -> Constant:
    if isinstance(term, Variable):
        return binding[term]
    return term


def evaluate_expression(expr: Expression, binding: Binding) -> Optional[Constant]:
    """
    Wertet einen arithmetischen Ausdruck exakt aus.

    Returns:
        Constant oder None, wenn der Ausdruck nicht definiert ist
        (nicht-numerische Operanden, Division durch 0)
    """
    if isinstance(expr, (Variable, Constant)):
        return _resolve(expr, binding)

    if isinstance(expr, Negate):
        value = evaluate_expression(expr.operand, binding)
        if value is None or not value.is_number:
            return None
        return Constant(-value.value)

    left = evaluate_expression(expr.left, binding)
    right = evaluate_expression(expr.right, binding)
    if left is None or right is None or not (left.is_number and right.is_number):
        return None
    if expr.op == "/" and right.value == 0:
        return None
    return Constant(_ARITHMETIC[expr.op](left.value, right.value))


def compare(op: str, left: Constant, right: Constant) -> bool:
    """
    Vergleich zweier Konstanten.

    Zahlen werden numerisch, Symbole/Strings lexikographisch verglichen;
    gemischte Paare sind nur ungleich, nie kleiner oder größer.
    """
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if left.is_number != right.is_number or left.quoted != right.quoted:
        return False
    return _ORDERING[op](left.value, right.value)


# =============================================================================
# REGELPLAN
# =============================================================================

class RulePlan:
    """
    Auswertungsreihenfolge eines Regelrumpfs.

    Positive Atome in geschriebener Reihenfolge; Builtins und Negationen
    so früh wie alle ihre Variablen gebunden sind.
    """

    def __init__(self, rule: Rule):
        self.rule = rule
        self.steps: List[object] = []

        pending = list(rule.body)
        bound: Set[Variable] = set()
        while pending:
            index = self._next_ready(pending, bound)
            literal = pending.pop(index)
            if isinstance(literal, Assignment):
                rhs = literal.expression
                if (literal.target in bound and isinstance(rhs, Variable) and rhs not in bound):
                    literal = Assignment(rhs, literal.target)
                bound.add(literal.target)
            elif isinstance(literal, Atom):
                bound.update(literal.variables())
            self.steps.append(literal)

        self.positive_positions = [i for i, step in enumerate(self.steps) if isinstance(step, Atom)]

    @staticmethod
    def _next_ready(pending: Sequence[object], bound: Set[Variable]) -> int:
        for i, literal in enumerate(pending):
            if isinstance(literal, (Comparison, Negation)) and set(literal.variables()) <= bound:
                return i
            if isinstance(literal, Assignment):
                rhs = set(_expr_vars(literal.expression))
                if rhs <= bound:
                    return i
                if literal.target in bound and isinstance(literal.expression, Variable):
                    return i
        for i, literal in enumerate(pending):
            if isinstance(literal, Atom):
                return i
        # Unsichere Regel: durch check_safety ausgeschlossen
        return 0


def _expr_vars(expr: Expression) -> Iterator[Variable]:
    if isinstance(expr, Variable):
        yield expr
    elif isinstance(expr, BinaryOp):
        yield from _expr_vars(expr.left)
        yield from _expr_vars(expr.right)
    elif isinstance(expr, Negate):
        yield from _expr_vars(expr.operand)


def _match(atom: Atom, binding: Binding, relation: Relation) -> Iterator[Binding]:
    positions = []
    key = []
    for i, term in enumerate(atom.terms):
        if isinstance(term, Constant):
            positions.append(i)
            key.append(term)
        elif term in binding:
            positions.append(i)
            key.append(binding[term])

    for fact in relation.lookup(tuple(positions), tuple(key)):
        extended = dict(binding)
        consistent = True
        for term, value in zip(atom.terms, fact):
            if isinstance(term, Variable):
                current = extended.get(term)
                if current is None:
                    extended[term] = value
                elif current != value:
                    consistent = False
                    break
        if consistent:
            yield extended


def _solve(plan: RulePlan, relations: Dict[Predicate, Relation],
           delta_step: Optional[int], delta: Optional[Relation]) -> Iterator[Binding]:
    """Alle Belegungen des Rumpfs; optional mit Delta-Relation an Schritt `delta_step`."""

    def walk(position: int, binding: Binding) -> Iterator[Binding]:
        if position == len(plan.steps):
            yield binding
            return
        step = plan.steps[position]

        if isinstance(step, Atom):
            if position == delta_step:
                relation = delta
            else:
                relation = relations.get(step.predicate) or _EMPTY
            for extended in _match(step, binding, relation):
                yield from walk(position + 1, extended)

        elif isinstance(step, Negation):
            relation = relations.get(step.atom.predicate) or _EMPTY
            fact = tuple(_resolve(t, binding) for t in step.atom.terms)
            if fact not in relation:
                yield from walk(position + 1, binding)

        elif isinstance(step, Comparison):
            if compare(step.op, _resolve(step.left, binding), _resolve(step.right, binding)):
                yield from walk(position + 1, binding)

        elif isinstance(step, Assignment):
            value = evaluate_expression(step.expression, binding)
            if value is None:
                return
            current = binding.get(step.target)
            if current is None:
                extended = dict(binding)
                extended[step.target] = value
                yield from walk(position + 1, extended)
            elif current == value:
                yield from walk(position + 1, binding)

    yield from walk(0, {})


_EMPTY = Relation()


def _instantiate(head: Atom, binding: Binding) -> Fact:
    return tuple(_resolve(term, binding) for term in head.terms)


# =============================================================================
# AUSWERTUNG
# =============================================================================

def evaluate(rules: Iterable[Rule], input_facts: Dataset,
             settings: Optional[EngineSettings] = None) -> Model:
    """
    Semi-naive, stratifizierte Auswertung.

    Args:
        rules: Regelmenge (sicher, stratifizierbar)
        input_facts: Datensatz mit Eingabefakten
        settings: Engine-Einstellungen (Ableitungslimit)

    Returns:
        Abgeleitete Fakten je Regelkopf-Prädikat, das nicht im Schema des
        Datensatzes liegt (auch leere Extensionen)

    Raises:
        SafetyError, NotStratifiable, DerivationCapExceeded
    """
    settings = settings or DEFAULT_SETTINGS
    rules = sorted(set(rules), key=lambda r: r.id)
    for rule in rules:
        check_safety(rule)

    strata = stratify(rules)

    relations: Dict[Predicate, Relation] = {
        predicate: Relation(facts) for predicate, facts in input_facts.extensions.items()
    }
    relations[TRUE] = Relation([()])

    derived_total = 0
    for number, stratum in enumerate(strata):
        stratum_rules = [r for r in rules if r.head.predicate in stratum]
        if not stratum_rules:
            continue
        derived_total = _evaluate_stratum(stratum_rules, stratum, relations, derived_total, settings)
        logger.debug("Stratum %d ausgewertet, %d abgeleitete Fakten gesamt", number, derived_total)

    heads = {r.head.predicate for r in rules} - input_facts.schema
    return {
        predicate: frozenset(relations[predicate].facts if predicate in relations else ())
        for predicate in sorted(heads)
    }


def _evaluate_stratum(rules: List[Rule], stratum: FrozenSet[Predicate],
                      relations: Dict[Predicate, Relation], derived_total: int,
                      settings: EngineSettings) -> int:
    plans = [RulePlan(rule) for rule in rules]
    for plan in plans:
        relations.setdefault(plan.rule.head.predicate, Relation())

    def record(new: Dict[Predicate, Set[Fact]], total: int) -> Tuple[Dict[Predicate, Relation], int]:
        delta: Dict[Predicate, Relation] = {}
        for predicate, facts in new.items():
            fresh = facts - relations[predicate].facts
            if fresh:
                total += len(fresh)
                if total > settings.derivation_cap:
                    raise DerivationCapExceeded(settings.derivation_cap)
                relations[predicate].add_all(fresh)
                delta[predicate] = Relation(fresh)
        return delta, total

    # Erste Runde: naiv über allen bekannten Fakten
    new: Dict[Predicate, Set[Fact]] = {}
    for plan in plans:
        head = plan.rule.head
        for binding in _solve(plan, relations, None, None):
            new.setdefault(head.predicate, set()).add(_instantiate(head, binding))
    delta, derived_total = record(new, derived_total)

    iteration = 1
    while delta:
        iteration += 1
        new = {}
        for plan in plans:
            head = plan.rule.head
            for position in plan.positive_positions:
                step = plan.steps[position]
                if step.predicate not in stratum or step.predicate not in delta:
                    continue
                for binding in _solve(plan, relations, position, delta[step.predicate]):
                    new.setdefault(head.predicate, set()).add(_instantiate(head, binding))
        delta, derived_total = record(new, derived_total)

    logger.debug("Stratum mit %d Regeln nach %d Iterationen stabil", len(rules), iteration)
    return derived_total
