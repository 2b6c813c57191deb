"""
Textdarstellung von Modulen, aufgelösten Modulen und Fakten.

render_module ist die Umkehrung von parse_module_file; render_resolved
erzeugt eine eigenständige Moduldatei ohne Parent.
"""

from typing import Dict, FrozenSet, Iterable, List, Union

from modules.model import IntendedModification, ResolvedModule, Restriction, RuleModule
from rules.parser import parse_facts
from rules.terms import Constant, Fact, Predicate, Rule, number, render_fact, sort_facts

INDENT = "    "


# =============================================================================
# MODULE
# =============================================================================

def _interface_lines(op: str, predicates: Iterable[Predicate]) -> List[str]:
    predicates = sorted(predicates)
    if not predicates:
        return []
    return [f"{INDENT * 2}{op} {', '.join(str(p) for p in predicates)};"]


def _section(name: str, body: List[str]) -> List[str]:
    if not body:
        return []
    return [f"{INDENT}{name} {{"] + body + [f"{INDENT}}}"]


def _restrict_lines(restrictions: Iterable[Restriction], intended: Iterable[IntendedModification]) -> List[str]:
    lines = [f"{INDENT * 2}{r};" for r in sorted(restrictions, key=lambda r: r.sort_key)]
    lines += [f"{INDENT * 2}{i};" for i in sorted(intended, key=lambda i: i.sort_key)]
    return lines


def _rule_lines(removed: Iterable[str], added: Iterable[Rule]) -> List[str]:
    lines = [f"{INDENT * 2}remove {rule_id};" for rule_id in sorted(removed)]
    lines += [f"{INDENT * 2}add {rule}" for rule in added]
    return lines


def _module_text(header: str, sections: List[str]) -> str:
    return "\n".join([header + " {"] + sections + ["}"]) + "\n"


def render_module(m: RuleModule) -> str:
    """Moduldatei in Deltaform."""
    header = f"module {m.id}" + (f" extends {m.parent}" if m.parent else "")
    sections = (
        _section("input", _interface_lines("add", m.inputs_added) + _interface_lines("remove", m.inputs_removed))
        + _section("output", _interface_lines("add", m.outputs_added) + _interface_lines("remove", m.outputs_removed))
        + _section("restrict", _restrict_lines(m.restrictions_added, m.intended))
        + _section("rules", _rule_lines(m.rules_removed, m.rules_added))
    )
    return _module_text(header, sections)


def render_resolved(rm: ResolvedModule) -> str:
    """
    Eigenständige Moduldatei mit aufgelöster Vererbung.

    Kein Parent, vollständige Regelmenge, Schnittstellen und Restriktionen.
    """
    sections = (
        _section("input", _interface_lines("add", rm.inputs))
        + _section("output", _interface_lines("add", rm.outputs))
        + _section("restrict", _restrict_lines(rm.restrictions, rm.intended))
        + _section("rules", _rule_lines((), rm.rules))
    )
    return _module_text(f"module {rm.id}", sections)


# =============================================================================
# FAKTEN
# =============================================================================

def render_facts(extensions: Dict[Predicate, FrozenSet[Fact]]) -> str:
    """Faktenzeilen, sortiert nach Prädikat und Tupel."""
    lines = []
    for predicate in sorted(extensions):
        lines.extend(render_fact(predicate, fact) for fact in sort_facts(extensions[predicate]))
    return "\n".join(lines) + ("\n" if lines else "")


def constant_to_json(constant: Constant) -> Union[int, str]:
    """
    Ganze Zahlen als JSON-Zahl, alles andere in Faktenschreibweise.

    Strings behalten ihre Anführungszeichen, damit `l1` und `"l1"` sowie
    `1/3` und `"1/3"` unterscheidbar bleiben (siehe constant_from_json).
    """
    if constant.is_number and constant.value.denominator == 1:
        return constant.value.numerator
    return str(constant)


def constant_from_json(value: Union[int, str]) -> Constant:
    """Umkehrung von constant_to_json."""
    if isinstance(value, int) and not isinstance(value, bool):
        return number(value)
    ((_, fact, _),) = parse_facts(f"c({value}).", "<json>")
    return fact[0]


def fact_to_json(fact: Fact) -> List[Union[int, str]]:
    return [constant_to_json(c) for c in fact]


def extensions_to_json(extensions: Dict[Predicate, FrozenSet[Fact]]) -> Dict[str, list]:
    return {
        str(predicate): [fact_to_json(fact) for fact in sort_facts(extensions[predicate])]
        for predicate in sorted(extensions)
    }
