"""
Chart-Factory für das rmod-Dashboard.

Reine Funktionen über Domänenobjekten (Hierarchie, Verhaltensberichte,
Konformitätsbericht) -> Plotly Figures. Keine Streamlit-Aufrufe.
"""

import plotly.graph_objects as go
import pandas as pd
from typing import Iterable, List
import sys
import os

# Import settings
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config.settings import (
    COLORS, CHANGE_CLASSES, CHANGE_CLASS_COLORS, CHART_HEIGHTS,
    STRUCTURAL_KINDS, BEHAVIORAL_KINDS
)
from conformance.behavior import BehaviorReport
from conformance.report import ConformanceReport
from modules.model import Hierarchy


def get_base_layout(title: str = "", show_legend: bool = True) -> dict:
    """
    Basis-Layout für alle Charts.

    Args:
        title: Chart-Titel
        show_legend: Ob Legende angezeigt werden soll

    Returns:
        Layout-Dictionary
    """
    return {
        "title": {
            "text": title,
            "font": {"size": 16, "color": COLORS["text_primary"]},
            "x": 0.5,
            "xanchor": "center"
        },
        "plot_bgcolor": "rgba(255,255,255,0)",
        "paper_bgcolor": "rgba(255,255,255,0)",
        "font": {"color": COLORS["text_primary"], "size": 12},
        "margin": dict(l=60, r=40, t=90, b=60),
        "hovermode": "closest",
        "showlegend": show_legend,
        "legend": {
            "orientation": "h",
            "yanchor": "bottom",
            "y": 1.02,
            "xanchor": "center",
            "x": 0.5,
            "bgcolor": "#FFFFFF",
            "bordercolor": "rgba(0,0,0,0)",
            "borderwidth": 0
        }
    }


# =============================================================================
# DATENAUFBEREITUNG
# =============================================================================

def hierarchy_frame(h: Hierarchy, abstract_ids: Iterable[str]) -> pd.DataFrame:
    """
    Eine Zeile je Modul: id, parent ("" für Wurzeln), abstract, rules.

    Module mit unbekanntem Parent werden als Wurzel dargestellt.
    """
    abstract = set(abstract_ids)
    rows = []
    for module_id in h.ids:
        module = h.modules[module_id]
        parent = module.parent if module.parent in h.modules else ""
        rows.append({
            "id": module_id,
            "parent": parent or "",
            "abstract": module_id in abstract,
            "rules": len(module.rules_added),
        })
    return pd.DataFrame(rows, columns=["id", "parent", "abstract", "rules"])


def change_frame(behavior_reports: Iterable[BehaviorReport]) -> pd.DataFrame:
    """Lange Tabelle (module, predicate, change) über alle verglichenen Prädikate."""
    rows = [
        {"module": report.child, "predicate": str(predicate), "change": change.value}
        for report in behavior_reports
        for predicate, change in sorted(report.classes.items())
    ]
    return pd.DataFrame(rows, columns=["module", "predicate", "change"])


def violation_frame(report: ConformanceReport) -> pd.DataFrame:
    """Anzahl Verletzungen je Kindmodul und Restriktionsart."""
    rows = [{"module": v.child, "kind": v.restriction.kind} for v in report.structural_violations]
    rows += [{"module": v.child, "kind": v.restriction.kind} for v in report.behavioral_violations]
    df = pd.DataFrame(rows, columns=["module", "kind"])
    if df.empty:
        return pd.DataFrame(columns=["module", "kind", "count"])
    return (
        df.groupby(["module", "kind"]).size()
        .reset_index(name="count")
        .sort_values(["module", "kind"])
        .reset_index(drop=True)
    )


# =============================================================================
# CHARTS
# =============================================================================

def create_hierarchy_sunburst(
    h: Hierarchy,
    abstract_ids: Iterable[str],
    title: str = "Modulhierarchie",
    height: int = CHART_HEIGHTS["large"]
) -> go.Figure:
    """
    Hierarchie als Sunburst; abstrakte Module grau, konkrete blau.

    Args:
        h: Hierarchie
        abstract_ids: IDs der abstrakten Module
        title: Chart-Titel
        height: Chart-Höhe

    Returns:
        Plotly Figure
    """
    df = hierarchy_frame(h, abstract_ids)
    colors = [
        COLORS["module_abstract"] if is_abstract else COLORS["module_concrete"]
        for is_abstract in df["abstract"]
    ]
    status = ["abstrakt" if is_abstract else "konkret" for is_abstract in df["abstract"]]

    fig = go.Figure(go.Sunburst(
        ids=df["id"],
        labels=df["id"],
        parents=df["parent"],
        customdata=list(zip(status, df["rules"])),
        marker=dict(
            colors=colors,
            line=dict(color=COLORS["background"], width=2)
        ),
        hovertemplate="<b>%{label}</b><br>%{customdata[0]}<br>%{customdata[1]} eigene Regeln<extra></extra>"
    ))

    layout = get_base_layout(title, show_legend=False)
    layout["height"] = height
    fig.update_layout(**layout)

    return fig


def create_change_heatmap(
    behavior_reports: Iterable[BehaviorReport],
    title: str = "Verhaltensänderungen",
    height: int = CHART_HEIGHTS["medium"]
) -> go.Figure:
    """
    Heatmap der Änderungsklassen: Zeilen = Kindmodule, Spalten = Prädikate.

    Nicht verglichene Kombinationen bleiben leer.

    Args:
        behavior_reports: Ergebnisse der dynamischen Erkennung
        title: Chart-Titel
        height: Chart-Höhe

    Returns:
        Plotly Figure
    """
    df = change_frame(behavior_reports)
    codes = {change: i for i, change in enumerate(CHANGE_CLASSES)}

    fig = go.Figure()
    if not df.empty:
        df["code"] = df["change"].map(codes)
        z = df.pivot(index="module", columns="predicate", values="code")
        labels = df.pivot(index="module", columns="predicate", values="change").fillna("")

        # Diskrete Farbskala: ein Band je Änderungsklasse
        n = len(CHANGE_CLASSES)
        colorscale = []
        for i, change in enumerate(CHANGE_CLASSES):
            colorscale.append([i / n, CHANGE_CLASS_COLORS[change]])
            colorscale.append([(i + 1) / n, CHANGE_CLASS_COLORS[change]])

        fig.add_trace(go.Heatmap(
            z=z.values,
            x=list(z.columns),
            y=list(z.index),
            text=labels.values,
            texttemplate="%{text}",
            zmin=-0.5,
            zmax=n - 0.5,
            colorscale=colorscale,
            showscale=False,
            xgap=2,
            ygap=2,
            hovertemplate="<b>%{y}</b> × <b>%{x}</b><br>%{text}<extra></extra>"
        ))

    layout = get_base_layout(title, show_legend=False)
    layout["height"] = height
    layout["xaxis"] = {"side": "bottom"}
    layout["yaxis"] = {"autorange": "reversed"}
    fig.update_layout(**layout)

    return fig


def create_violation_bar(
    report: ConformanceReport,
    title: str = "Verletzungen je Modul",
    height: int = CHART_HEIGHTS["medium"]
) -> go.Figure:
    """
    Gestapelte Balken: Verletzungen je Kindmodul, eingefärbt nach Art.

    Strukturelle Arten in Blautönen, Verhaltensarten in Rot/Amber.
    """
    df = violation_frame(report)
    kind_colors = dict(zip(
        STRUCTURAL_KINDS + BEHAVIORAL_KINDS,
        [COLORS["accent_blue"], COLORS["accent_blue_light"], COLORS["text_secondary"],
         COLORS["card_border"], COLORS["accent_red"], COLORS["accent_amber"]]
    ))

    fig = go.Figure()
    kinds: List[str] = [k for k in STRUCTURAL_KINDS + BEHAVIORAL_KINDS if k in set(df["kind"])]
    for kind in kinds:
        kind_data = df[df["kind"] == kind]
        fig.add_trace(go.Bar(
            x=kind_data["module"],
            y=kind_data["count"],
            name=kind,
            marker_color=kind_colors[kind],
            hovertemplate="<b>%{x}</b><br>" + kind + ": %{y}<extra></extra>"
        ))

    layout = get_base_layout(title)
    layout["height"] = height
    layout["barmode"] = "stack"
    layout["yaxis"] = {"title": "Anzahl", "dtick": 1, "rangemode": "tozero"}
    fig.update_layout(**layout)

    return fig
