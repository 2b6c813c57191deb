"""
Parser der Regelsprache (lark, LALR).

Eine Grammatik für Regeln, Faktendateien und Moduldateien; der
Transformer baut direkt die unveränderlichen Datentypen aus rules.terms
bzw. modules.model.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from rules.analysis import check_safety
from rules.errors import RuleSyntaxError, SourceError, SourceLocation
from rules.terms import (
    Assignment, Atom, BinaryOp, Comparison, Constant, Fact, Negate, Negation,
    Predicate, Rule, Variable,
)

logger = logging.getLogger(__name__)

# =============================================================================
# GRAMMATIK
# =============================================================================

GRAMMAR = r"""
    // ---- Regeln ----------------------------------------------------------
    rule: RULE_ID ":" atom ":-" literal ("," literal)* "."

    program: rule*

    ?literal: atom
            | "not" atom                  -> negation
            | term CMP term               -> comparison
            | value "=" term              -> equality
            | VAR "=" arith               -> assignment

    atom: NAME ("(" [term ("," term)*] ")")?

    ?term: VAR                            -> variable
         | value

    ?value: NAME                          -> symbol
          | STRING                        -> string
          | NUMBER                        -> number
          | "-" NUMBER                    -> negative_number

    ?arith: arith "+" product             -> add
          | arith "-" product             -> sub
          | product
    ?product: product "*" factor          -> mul
            | product "/" factor          -> div
            | factor
    ?factor: VAR                          -> variable
           | NAME                         -> symbol
           | STRING                       -> string
           | NUMBER                       -> number
           | "-" factor                   -> neg
           | "(" arith ")"

    // ---- Fakten ----------------------------------------------------------
    facts: fact*
    fact: NAME ("(" [fact_value ("," fact_value)*] ")")? "."
    ?fact_value: value
               | NUMBER "/" NUMBER        -> fraction
               | "-" NUMBER "/" NUMBER    -> negative_fraction

    // ---- Moduldateien ----------------------------------------------------
    module: "module" MODULE_ID ["extends" MODULE_ID] "{" section* "}"

    ?section: "input" "{" iface_entry* "}"      -> input_section
            | "output" "{" iface_entry* "}"     -> output_section
            | "restrict" "{" restrict_entry* "}" -> restrict_section
            | "rules" "{" rule_entry* "}"       -> rules_section

    iface_entry: iface_op signature ("," signature)* ";"
    !iface_op: "add" | "remove"

    ?restrict_entry: NAME ";"                    -> restriction_global
                   | NAME "(" signature ")" ";"  -> restriction_predicate
                   | "intend" NAME signature ";" -> intention

    ?rule_entry: "add" rule                      -> rule_add
               | "remove" "rule"? RULE_ID ";"     -> rule_remove

    signature: NAME "/" INT

    // ---- Terminale -------------------------------------------------------
    CMP: "<=" | ">=" | "!=" | "<" | ">"
    RULE_ID: /[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z0-9_]+)*/
    MODULE_ID: /[A-Za-z_][A-Za-z0-9_]*/
    VAR: /[A-Z_][A-Za-z0-9_]*/
    NAME: /[a-z][A-Za-z0-9_]*/
    NUMBER: /\d+(\.\d+)?/
    INT: /\d+/
    STRING: /"(\\.|[^"\\])*"/

    COMMENT: /%[^\n]*/
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_PARSER = Lark(
    GRAMMAR,
    start=["rule", "program", "facts", "module"],
    parser="lalr",
    propagate_positions=True,
    maybe_placeholders=True,
)


# =============================================================================
# TRANSFORMER
# =============================================================================

def _unescape(token: str) -> str:
    body = token[1:-1]
    out = []
    i = 0
    while i < len(body):
        char = body[i]
        if char == "\\" and i + 1 < len(body):
            i += 1
            char = {"n": "\n", "t": "\t"}.get(body[i], body[i])
        out.append(char)
        i += 1
    return "".join(out)


class _Positioned:
    """Hilfsobjekt: Wert plus Quellposition (für Moduldeklarationen)."""

    __slots__ = ("value", "line", "column")

    def __init__(self, value, line: int, column: int):
        self.value = value
        self.line = line
        self.column = column


class RuleTransformer(Transformer):
    """Baut Regeln, Fakten und Modul-Rohdaten aus dem Parsebaum."""

    # ---- Terme ------------------------------------------------------------

    def variable(self, items):
        (token,) = items
        return Variable(str(token))

    def symbol(self, items):
        (token,) = items
        return Constant(str(token))

    def string(self, items):
        (token,) = items
        return Constant(_unescape(str(token)), quoted=True)

    def number(self, items):
        (token,) = items
        return Constant(Fraction(str(token)))

    def negative_number(self, items):
        (token,) = items
        return Constant(-Fraction(str(token)))

    def fraction(self, items):
        numerator, denominator = items
        if Fraction(str(denominator)) == 0:
            raise RuleSyntaxError("Nenner 0 in Bruchkonstante",
                                  SourceLocation("<input>", denominator.line, denominator.column))
        return Constant(Fraction(str(numerator)) / Fraction(str(denominator)))

    def negative_fraction(self, items):
        return Constant(-self.fraction(items).value)

    # ---- Arithmetik -------------------------------------------------------

    def add(self, items):
        return BinaryOp("+", items[0], items[1])

    def sub(self, items):
        return BinaryOp("-", items[0], items[1])

    def mul(self, items):
        return BinaryOp("*", items[0], items[1])

    def div(self, items):
        return BinaryOp("/", items[0], items[1])

    def neg(self, items):
        (operand,) = items
        if isinstance(operand, Constant) and operand.is_number:
            return Constant(-operand.value)
        return Negate(operand)

    # ---- Literale ---------------------------------------------------------

    def atom(self, items):
        name = str(items[0])
        terms = tuple(t for t in items[1:] if t is not None)
        return Atom(Predicate(name, len(terms)), terms)

    def negation(self, items):
        (atom,) = items
        return Negation(atom)

    def comparison(self, items):
        left, op, right = items
        return Comparison(str(op), left, right)

    def equality(self, items):
        left, right = items
        return Comparison("=", left, right)

    def assignment(self, items):
        target, expression = items
        return Assignment(Variable(str(target)), expression)

    @v_args(meta=True)
    def rule(self, meta, items):
        rule_id = str(items[0])
        rule = Rule(rule_id, items[1], tuple(items[2:]))
        return _Positioned(rule, meta.line, meta.column)

    def program(self, items):
        return list(items)

    # ---- Fakten -----------------------------------------------------------

    @v_args(meta=True)
    def fact(self, meta, items):
        name = str(items[0])
        values = tuple(v for v in items[1:] if v is not None)
        return _Positioned((Predicate(name, len(values)), values), meta.line, meta.column)

    def facts(self, items):
        return list(items)

    # ---- Moduldateien -----------------------------------------------------

    def signature(self, items):
        name, arity = items
        return _Positioned(Predicate(str(name), int(arity)), name.line, name.column)

    def iface_op(self, items):
        (token,) = items
        return str(token)

    def iface_entry(self, items):
        op = items[0]
        return [(op, sig) for sig in items[1:]]

    def input_section(self, items):
        return ("input", [entry for group in items for entry in group])

    def output_section(self, items):
        return ("output", [entry for group in items for entry in group])

    def restriction_global(self, items):
        (name,) = items
        return _Positioned(("restriction", str(name), None), name.line, name.column)

    def restriction_predicate(self, items):
        name, signature = items
        return _Positioned(("restriction", str(name), signature.value), name.line, name.column)

    @v_args(meta=True)
    def intention(self, meta, items):
        change, signature = items
        return _Positioned(("intend", str(change), signature.value), meta.line, meta.column)

    def restrict_section(self, items):
        return ("restrict", list(items))

    def rule_add(self, items):
        (positioned,) = items
        return ("add", positioned)

    def rule_remove(self, items):
        (token,) = items
        return ("remove", _Positioned(str(token), token.line, token.column))

    def rules_section(self, items):
        return ("rules", list(items))

    @v_args(meta=True)
    def module(self, meta, items):
        module_id, parent = items[0], items[1]
        sections = items[2:]
        return {
            "id": _Positioned(str(module_id), module_id.line, module_id.column),
            "parent": _Positioned(str(parent), parent.line, parent.column) if parent is not None else None,
            "sections": sections,
            "line": meta.line,
            "column": meta.column,
        }


_TRANSFORMER = RuleTransformer()


# =============================================================================
# ÖFFENTLICHE FUNKTIONEN
# =============================================================================

def _parse(text: str, start: str, path: str):
    """Parst und transformiert; übersetzt lark-Fehler in RuleSyntaxError."""
    try:
        tree = _PARSER.parse(text, start=start)
        return _TRANSFORMER.transform(tree)
    except UnexpectedEOF as e:
        lines = text.splitlines() or [""]
        location = SourceLocation(path, len(lines), len(lines[-1]) + 1)
        raise RuleSyntaxError(f"Unerwartetes Dateiende, erwartet: {_expected(e.expected)}", location)
    except UnexpectedToken as e:
        location = SourceLocation(path, e.line, e.column)
        if e.token.type == "$END":
            message = f"Unerwartetes Dateiende, erwartet: {_expected(e.expected)}"
        else:
            message = f"Unerwartetes Token {str(e.token)!r}, erwartet: {_expected(e.expected)}"
        raise RuleSyntaxError(message, location)
    except UnexpectedCharacters as e:
        location = SourceLocation(path, e.line, e.column)
        raise RuleSyntaxError(f"Unerwartetes Zeichen {text[e.pos_in_stream]!r}", location)
    except UnexpectedInput as e:
        raise RuleSyntaxError(str(e), SourceLocation(path, e.line, e.column))
    except VisitError as e:
        if isinstance(e.orig_exc, SourceError):
            error = e.orig_exc
            if error.location is not None:
                error.location = SourceLocation(path, error.location.line, error.location.column)
            raise error
        if isinstance(e.orig_exc, ValueError):
            line = getattr(e.obj.meta, "line", 1) if hasattr(e.obj, "meta") else 1
            column = getattr(e.obj.meta, "column", 1) if hasattr(e.obj, "meta") else 1
            raise RuleSyntaxError(str(e.orig_exc), SourceLocation(path, line, column))
        raise


def _expected(expected) -> str:
    return ", ".join(sorted(str(name) for name in expected)[:8])


def _checked(positioned: _Positioned, path: str) -> Rule:
    rule = positioned.value
    try:
        check_safety(rule)
    except SourceError as error:
        raise error.at(SourceLocation(path, positioned.line, positioned.column))
    return rule


def parse_rule(text: str, path: str = "<input>") -> Rule:
    """
    Parst eine einzelne Regel `ID: kopf :- rumpf.` und prüft ihre Sicherheit.

    Args:
        text: Regeltext
        path: Dateiname für Fehlermeldungen

    Returns:
        Rule

    Raises:
        RuleSyntaxError: Syntaxfehler mit Zeile/Spalte
        SafetyError: Ungebundene Variable (wird in der Meldung genannt)
    """
    return _checked(_parse(text, "rule", path), path)


def parse_program(text: str, path: str = "<input>") -> List[Rule]:
    """Parst beliebig viele Regeln (mit %-Kommentaren)."""
    return [_checked(positioned, path) for positioned in _parse(text, "program", path)]


def parse_facts(text: str, path: str = "<input>") -> List[Tuple[Predicate, Fact, SourceLocation]]:
    """
    Parst Faktenzeilen `praedikat(c1, ..., cn).`.

    Returns:
        Liste aus (Prädikat, Tupel, Position)
    """
    return [
        (positioned.value[0], positioned.value[1], SourceLocation(path, positioned.line, positioned.column))
        for positioned in _parse(text, "facts", path)
    ]


def parse_module_tree(text: str, path: str = "<input>") -> dict:
    """Parst eine Moduldatei in Rohdaten mit Positionen (siehe data.loader)."""
    return _parse(text, "module", path)


def render_rule(rule: Rule) -> str:
    """Kanonische Textform einer Regel."""
    return str(rule)
