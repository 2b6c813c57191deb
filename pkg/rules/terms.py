"""
Datentypen der Regelsprache.

Prädikate, Terme, Atome, Literale, Regeln und Datensätze. Alle Typen sind
unveränderlich (frozen dataclasses) und damit hashbar und threadsicher.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterator, Mapping, Optional, Tuple, Union

_SYMBOL_RE = re.compile(r"^[a-z][A-Za-z0-9_]*$")


# =============================================================================
# PRÄDIKATE
# =============================================================================

@dataclass(frozen=True, order=True)
class Predicate:
    """Relation mit Name und Stelligkeit; Identität ist das Paar."""

    name: str
    arity: int

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"

    @classmethod
    def from_signature(cls, signature: str) -> "Predicate":
        """Erzeugt ein Prädikat aus `name/arity`."""
        name, _, arity = signature.strip().rpartition("/")
        if not name or not arity.isdigit():
            raise ValueError(f"Ungültige Prädikatsignatur: {signature!r}")
        return cls(name, int(arity))


TRUE = Predicate("true", 0)


# =============================================================================
# TERME
# =============================================================================

@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Constant:
    """
    Konstante: exakte rationale Zahl, Symbol oder String.

    Symbole und Strings werden unterschieden (`l1` ist nicht `"l1"`).
    """

    value: Union[Fraction, str]
    quoted: bool = False

    def __post_init__(self):
        if isinstance(self.value, (int, Fraction)) and not isinstance(self.value, bool):
            object.__setattr__(self, "value", Fraction(self.value))
            object.__setattr__(self, "quoted", False)
        elif not isinstance(self.value, str):
            raise TypeError(f"Ungültiger Konstantenwert: {self.value!r}")

    @property
    def is_number(self) -> bool:
        return isinstance(self.value, Fraction)

    @property
    def sort_key(self) -> Tuple[int, Union[Fraction, str]]:
        if self.is_number:
            return (0, self.value)
        return (2 if self.quoted else 1, self.value)

    def __str__(self) -> str:
        if self.is_number:
            return format_number(self.value)
        if self.quoted or not _SYMBOL_RE.match(self.value):
            escaped = self.value.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'
        return self.value


Term = Union[Variable, Constant]


def number(value: Union[int, str, Fraction]) -> Constant:
    """Erzeugt eine numerische Konstante (Dezimalstrings werden exakt gelesen)."""
    return Constant(Fraction(value))


def symbol(value: str) -> Constant:
    return Constant(value)


def string(value: str) -> Constant:
    return Constant(value, quoted=True)


def format_number(value: Fraction) -> str:
    """
    Rendert eine rationale Zahl.

    Ganze Zahlen ohne Nachkommastellen, abbrechende Brüche exakt dezimal,
    sonst `n/d`.
    """
    if value.denominator == 1:
        return str(value.numerator)

    denominator = value.denominator
    twos = fives = 0
    while denominator % 2 == 0:
        denominator //= 2
        twos += 1
    while denominator % 5 == 0:
        denominator //= 5
        fives += 1
    if denominator != 1:
        return f"{value.numerator}/{value.denominator}"

    digits = max(twos, fives)
    scaled = abs(value.numerator) * (10 ** digits) // value.denominator
    sign = "-" if value < 0 else ""
    text = str(scaled).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}".rstrip("0").rstrip(".")


# =============================================================================
# ARITHMETIK
# =============================================================================

@dataclass(frozen=True)
class BinaryOp:
    op: str  # + - * /
    left: "Expression"
    right: "Expression"

    def __str__(self) -> str:
        return f"{_render_operand(self.left, self.op, False)} {self.op} {_render_operand(self.right, self.op, True)}"


@dataclass(frozen=True)
class Negate:
    operand: "Expression"

    def __str__(self) -> str:
        if isinstance(self.operand, (Variable, Constant)):
            return f"-{self.operand}"
        return f"-({self.operand})"


Expression = Union[Variable, Constant, BinaryOp, Negate]

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _render_operand(expr: "Expression", parent_op: str, is_right: bool) -> str:
    if isinstance(expr, BinaryOp):
        inner, outer = _PRECEDENCE[expr.op], _PRECEDENCE[parent_op]
        if inner < outer or (is_right and inner == outer):
            return f"({expr})"
    if isinstance(expr, Constant) and expr.is_number and expr.value < 0:
        return f"({expr})"
    return str(expr)


def expression_variables(expr: Expression) -> Iterator[Variable]:
    if isinstance(expr, Variable):
        yield expr
    elif isinstance(expr, BinaryOp):
        yield from expression_variables(expr.left)
        yield from expression_variables(expr.right)
    elif isinstance(expr, Negate):
        yield from expression_variables(expr.operand)


# =============================================================================
# ATOME UND LITERALE
# =============================================================================

@dataclass(frozen=True)
class Atom:
    predicate: Predicate
    terms: Tuple[Term, ...] = ()

    def __post_init__(self):
        if len(self.terms) != self.predicate.arity:
            raise ValueError(f"Atom {self.predicate} mit {len(self.terms)} Argumenten")

    def variables(self) -> Iterator[Variable]:
        for term in self.terms:
            if isinstance(term, Variable):
                yield term

    def __str__(self) -> str:
        if not self.terms:
            return self.predicate.name
        return f"{self.predicate.name}({', '.join(str(t) for t in self.terms)})"


@dataclass(frozen=True)
class Negation:
    atom: Atom

    def variables(self) -> Iterator[Variable]:
        return self.atom.variables()

    def __str__(self) -> str:
        return f"not {self.atom}"


COMPARISON_OPS = ("<", "<=", "=", "!=", ">=", ">")


@dataclass(frozen=True)
class Comparison:
    op: str
    left: Term
    right: Term

    def variables(self) -> Iterator[Variable]:
        for term in (self.left, self.right):
            if isinstance(term, Variable):
                yield term

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class Assignment:
    """Arithmetische Bindung `V = expr`; ist V schon gebunden, ein Gleichheitstest."""

    target: Variable
    expression: Expression

    def variables(self) -> Iterator[Variable]:
        yield self.target
        yield from expression_variables(self.expression)

    def __str__(self) -> str:
        return f"{self.target} = {self.expression}"


Literal = Union[Atom, Negation, Comparison, Assignment]


# =============================================================================
# REGELN
# =============================================================================

@dataclass(frozen=True)
class Rule:
    """Regel mit ID, Kopfatom und geordnetem Rumpf."""

    id: str
    head: Atom
    body: Tuple[Literal, ...]

    @property
    def body_predicates(self) -> FrozenSet[Predicate]:
        """B_r: Prädikate aller positiven und negierten Rumpfatome."""
        predicates = set()
        for literal in self.body:
            if isinstance(literal, Atom):
                predicates.add(literal.predicate)
            elif isinstance(literal, Negation):
                predicates.add(literal.atom.predicate)
        return frozenset(predicates)

    @property
    def head_predicates(self) -> FrozenSet[Predicate]:
        """H_r: immer genau das Kopfprädikat."""
        return frozenset({self.head.predicate})

    @property
    def negated_predicates(self) -> FrozenSet[Predicate]:
        return frozenset(l.atom.predicate for l in self.body if isinstance(l, Negation))

    def predicates(self) -> Tuple[FrozenSet[Predicate], FrozenSet[Predicate]]:
        return self.body_predicates, self.head_predicates

    def variables(self) -> FrozenSet[Variable]:
        found = set(self.head.variables())
        for literal in self.body:
            found.update(literal.variables())
        return frozenset(found)

    def __str__(self) -> str:
        body = ", ".join(str(literal) for literal in self.body)
        return f"{self.id}: {self.head} :- {body}."


def rule_predicates(rule: Rule) -> Tuple[FrozenSet[Predicate], FrozenSet[Predicate]]:
    """
    Liefert (B_r, H_r) einer Regel.

    Args:
        rule: Regel

    Returns:
        Tupel aus Rumpf- und Kopfprädikaten
    """
    return rule.predicates()


# =============================================================================
# DATENSÄTZE
# =============================================================================

Fact = Tuple[Constant, ...]


@dataclass(frozen=True)
class Dataset:
    """Benannte Menge von Extensionen; das Schema P_d ist die Schlüsselmenge."""

    name: str
    extensions: Mapping[Predicate, FrozenSet[Fact]] = field(default_factory=dict)

    def __post_init__(self):
        frozen: Dict[Predicate, FrozenSet[Fact]] = {}
        for predicate, facts in self.extensions.items():
            facts = frozenset(tuple(fact) for fact in facts)
            for fact in facts:
                if len(fact) != predicate.arity:
                    raise ValueError(
                        f"Fakt {fact} passt nicht zur Stelligkeit von {predicate} in Datensatz {self.name}"
                    )
            frozen[predicate] = facts
        object.__setattr__(self, "extensions", dict(sorted(frozen.items())))

    @property
    def schema(self) -> FrozenSet[Predicate]:
        return frozenset(self.extensions)

    def facts(self, predicate: Predicate) -> FrozenSet[Fact]:
        return self.extensions.get(predicate, frozenset())

    def restrict(self, predicates: FrozenSet[Predicate], name: Optional[str] = None) -> "Dataset":
        """Datensatz nur mit den angegebenen Prädikaten."""
        return Dataset(name or self.name, {p: f for p, f in self.extensions.items() if p in predicates})

    def __hash__(self) -> int:
        return hash((self.name, tuple(self.extensions.items())))


def sort_facts(facts) -> list:
    """Deterministische Reihenfolge von Fakten."""
    return sorted(facts, key=lambda fact: tuple(c.sort_key for c in fact))


def render_fact(predicate: Predicate, fact: Fact) -> str:
    return f"{Atom(predicate, tuple(fact))}."
