"""
Unabhängiger, naiver Auswerter und Zufallsprogramme für Äquivalenztests.

Der Oracle-Auswerter kennt weder Indizes noch Semi-Naivität noch den
Abhängigkeitsgraphen: Er bildet das Kreuzprodukt der positiven
Rumpfatome und filtert. Die Zufallsprogramme sind so gebaut, dass die
Strata direkt aus den Prädikatnamen folgen (d0, d1, ...).
"""

import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from rules.evaluation import compare
from rules.terms import (
    Assignment, Atom, BinaryOp, Comparison, Constant, Dataset, Fact, Negate, Negation,
    TRUE, Predicate, Rule, Variable, expression_variables, number,
)

INPUTS = [Predicate("e0", 2), Predicate("e1", 2), Predicate("e2", 1)]
VARIABLES = [Variable(name) for name in ("X", "Y", "Z", "W")]
COMPUTED = Variable("V")


# =============================================================================
# NAIVER AUSWERTER
# =============================================================================

def _body_bindings(rule: Rule, facts: Dict[Predicate, Set[Fact]]):
    atoms = [l for l in rule.body if isinstance(l, Atom)]
    for combination in itertools.product(*(sorted(facts.get(a.predicate, ()), key=str) for a in atoms)):
        binding: Dict[Variable, Constant] = {}
        ok = True
        for atom, fact in zip(atoms, combination):
            for term, value in zip(atom.terms, fact):
                if isinstance(term, Variable):
                    if binding.setdefault(term, value) != value:
                        ok = False
                elif term != value:
                    ok = False
        if not ok:
            continue
        if _apply_builtins([l for l in rule.body if not isinstance(l, Atom)], binding, facts):
            yield binding


def _value(term, binding):
    return binding[term] if isinstance(term, Variable) else term


def _arithmetic(expr, binding) -> Optional[Fraction]:
    """Eigener Rechenweg: None bei Symbolen/Strings und Division durch 0."""
    if isinstance(expr, (Variable, Constant)):
        constant = _value(expr, binding)
        return constant.value if isinstance(constant.value, Fraction) else None
    if isinstance(expr, Negate):
        operand = _arithmetic(expr.operand, binding)
        return None if operand is None else -operand
    left, right = _arithmetic(expr.left, binding), _arithmetic(expr.right, binding)
    if left is None or right is None:
        return None
    if expr.op == "+":
        return left + right
    if expr.op == "-":
        return left - right
    if expr.op == "*":
        return left * right
    return None if right == 0 else left / right


def _ready(literal, binding) -> bool:
    if isinstance(literal, Assignment):
        return set(expression_variables(literal.expression)) <= set(binding)
    return set(literal.variables()) <= set(binding)


def _apply_builtins(literals: List, binding: Dict[Variable, Constant], facts) -> bool:
    """Negationen, Vergleiche und Bindungen in beliebiger bereiter Reihenfolge; erweitert `binding`."""
    pending = list(literals)
    while pending:
        literal = next((l for l in pending if _ready(l, binding)), None)
        if literal is None:
            raise ValueError("Oracle: unsichere Regel")
        pending.remove(literal)

        if isinstance(literal, Negation):
            fact = tuple(_value(t, binding) for t in literal.atom.terms)
            ok = fact not in facts.get(literal.atom.predicate, set())
        elif isinstance(literal, Comparison):
            ok = compare(literal.op, _value(literal.left, binding), _value(literal.right, binding))
        else:
            result = _arithmetic(literal.expression, binding)
            if result is None:
                return False
            ok = binding.setdefault(literal.target, number(result)) == number(result)
        if not ok:
            return False
    return True


def naive_evaluate(rules: Sequence[Rule], dataset: Dataset, order: Sequence[Predicate]) -> Dict[Predicate, frozenset]:
    """
    Wertet Regeln prädikatweise in der gegebenen Reihenfolge naiv bis zum Fixpunkt aus.

    `order` muss eine gültige Stratifizierung sein (negierte Prädikate vorher).
    """
    facts: Dict[Predicate, Set[Fact]] = {p: set(f) for p, f in dataset.extensions.items()}
    facts.setdefault(TRUE, {()})
    for predicate in order:
        own = [r for r in rules if r.head.predicate == predicate]
        facts.setdefault(predicate, set())
        changed = True
        while changed:
            changed = False
            for rule in own:
                for binding in list(_body_bindings(rule, facts)):
                    fact = tuple(_value(t, binding) for t in rule.head.terms)
                    if fact not in facts[predicate]:
                        facts[predicate].add(fact)
                        changed = True
    return {p: frozenset(facts[p]) for p in order}


def naive_order(rules: Sequence[Rule]) -> List[Predicate]:
    """
    Reihenfolge der Kopfprädikate: jedes nach allen Prädikaten, von denen es abhängt.

    Nur direkte Rekursion (p hängt von p ab) wird unterstützt; das reicht
    für die Beispielmodule.
    """
    depends: Dict[Predicate, Set[Predicate]] = {}
    for rule in rules:
        body = {l.predicate for l in rule.body if isinstance(l, Atom)}
        body |= {l.atom.predicate for l in rule.body if isinstance(l, Negation)}
        depends.setdefault(rule.head.predicate, set()).update(body - {rule.head.predicate})

    order: List[Predicate] = []
    remaining = dict(depends)
    while remaining:
        ready = sorted(p for p, deps in remaining.items() if not deps & set(remaining))
        if not ready:
            raise ValueError("Oracle: wechselseitige Rekursion")
        order.extend(ready)
        for predicate in ready:
            del remaining[predicate]
    return order


# =============================================================================
# ZUFALLSPROGRAMME
# =============================================================================

def random_dataset(rng: np.random.Generator, name: str = "random", domain: int = 4) -> Dataset:
    extensions = {}
    for predicate in INPUTS:
        count = int(rng.integers(0, 7))
        extensions[predicate] = {
            tuple(number(int(v)) for v in rng.integers(0, domain, size=predicate.arity))
            for _ in range(count)
        }
    return Dataset(name, extensions)


def random_program(rng: np.random.Generator, derived: int = 3,
                   negation: bool = True) -> Tuple[List[Rule], List[Predicate]]:
    """
    Erzeugt ein sicheres, stratifizierbares Programm.

    d_i hängt positiv von Inputs und d_j (j <= i) ab, negativ nur von
    Inputs und d_j (j < i). Ohne `negation` ist das Programm monoton.
    Liefert (Regeln, Auswertungsreihenfolge).
    """
    heads = [Predicate(f"d{i}", int(rng.integers(1, 3))) for i in range(derived)]
    rules: List[Rule] = []

    for i, head in enumerate(heads):
        positive_pool = INPUTS + heads[: i + 1]
        negative_pool = INPUTS + heads[:i]
        for k in range(int(rng.integers(1, 4))):
            body = []
            bound: List[Variable] = []
            for _ in range(int(rng.integers(1, 3))):
                predicate = positive_pool[int(rng.integers(0, len(positive_pool)))]
                if predicate == head and not body:
                    # erstes Atom nie rekursiv, damit jede Regel über Inputs startet
                    predicate = INPUTS[int(rng.integers(0, len(INPUTS)))]
                terms = tuple(VARIABLES[int(rng.integers(0, len(VARIABLES)))] for _ in range(predicate.arity))
                body.append(Atom(predicate, terms))
                bound.extend(t for t in terms if t not in bound)

            recursive = any(atom.predicate == head for atom in body)
            # Bindungen nur in nicht-rekursiven Regeln: der Wertebereich bleibt endlich
            if not recursive and rng.random() < 0.35:
                op = ("+", "-", "*", "/")[int(rng.integers(0, 4))]
                source = bound[int(rng.integers(0, len(bound)))]
                expression = BinaryOp(op, source, number(int(rng.integers(0, 4))))
                if rng.random() < 0.25:
                    target = bound[int(rng.integers(0, len(bound)))]
                else:
                    target = COMPUTED
                    bound.append(COMPUTED)
                body.append(Assignment(target, expression))

            if negation and rng.random() < 0.4:
                predicate = negative_pool[int(rng.integers(0, len(negative_pool)))]
                terms = tuple(bound[int(rng.integers(0, len(bound)))] for _ in range(predicate.arity))
                body.append(Negation(Atom(predicate, terms)))

            if rng.random() < 0.3:
                op = ("<", "<=", "!=", "=", ">=", ">")[int(rng.integers(0, 6))]
                left = bound[int(rng.integers(0, len(bound)))]
                right = number(int(rng.integers(0, 4))) if rng.random() < 0.5 else bound[int(rng.integers(0, len(bound)))]
                body.append(Comparison(op, left, right))

            head_terms = tuple(bound[int(rng.integers(0, len(bound)))] for _ in range(head.arity))
            rules.append(Rule(f"r{i}_{k}", Atom(head, head_terms), tuple(body)))

    return rules, heads
