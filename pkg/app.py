"""
rmod Dashboard - Haupteinstiegspunkt

Streamlit-Ansicht über einen Workspace mit Regelmodulen: Hierarchie,
Abstraktheit, Konformitätsverletzungen und Verhaltensänderungen.

Start: streamlit run app.py
"""

import json
import time
from typing import Optional, Tuple

import streamlit as st

from components.charts import create_change_heatmap, create_hierarchy_sunburst, create_violation_bar
from components.kpi_card import kpi_row
from components.sidebar import render_selection
from config.settings import PAGE_CONFIG, COLORS, format_duration, get_status_color
from conformance.checker import run_conformance_check
from conformance.report import ConformanceReport, report_to_dict
from data.loader import Workspace, load_datasets, load_workspace
from data.render import render_resolved
from modules.hierarchy import resolve
from rules.errors import RmodError, WorkspaceError

# =============================================================================
# PAGE CONFIGURATION
# =============================================================================

st.set_page_config(**PAGE_CONFIG)

# =============================================================================
# DATEN
# =============================================================================

@st.cache_data
def load_and_check(workspace_path: str, module_id: Optional[str], data_path: Optional[str],
                   affected: bool = False) -> Tuple[Workspace, ConformanceReport]:
    """Lädt den Workspace und führt die Konformitätsprüfung aus (gecacht je Auswahl)."""
    started = time.perf_counter()
    workspace = load_workspace(workspace_path)
    datasets = load_datasets(data_path) if data_path else None
    report = run_conformance_check(
        workspace,
        module_id=module_id,
        structural=True,
        behavioral=datasets is not None,
        datasets=datasets,
        started=started,
        affected=affected,
    )
    return workspace, report


# =============================================================================
# MAIN APP
# =============================================================================

def main():
    """Hauptfunktion."""

    # Header
    st.markdown(
        f"""
        <div style='text-align: center; padding: 1rem 0 2rem 0;'>
            <h1 style='color: {COLORS["accent_blue"]}; margin-bottom: 0.5rem;'>🧩 rmod</h1>
            <p style='color: {COLORS["text_secondary"]}; font-size: 1.1rem;'>
                Regelmodule, Vererbung und Modifikationsrestriktionen
            </p>
        </div>
        """,
        unsafe_allow_html=True
    )

    module_ids = st.session_state.get("module_ids")
    selection = render_selection(module_ids)

    try:
        workspace, report = load_and_check(
            selection["workspace"], selection["module"], selection["data"], selection["affected"],
        )
    except WorkspaceError as e:
        st.error(f"❌ Workspace ungültig ({len(e.errors)} Fehler)")
        st.code("\n".join(str(error) for error in e.errors), language="text")
        return
    except (RmodError, OSError) as e:
        st.error(f"❌ {e}")
        return

    if st.session_state.get("module_ids") != workspace.hierarchy.ids:
        st.session_state["module_ids"] = workspace.hierarchy.ids
        st.rerun()

    h = workspace.hierarchy
    abstract_ids = [module_id for module_id in h.ids if resolve(h, module_id).is_abstract]

    for warning in report.warnings:
        st.warning(f"⚠️ {warning}")
    for error in report.errors:
        st.error(f"❌ {error}")

    # KPIs
    status = get_status_color(report.violation_count, len(report.errors))
    kpi_row([
        {"title": "Module", "value": str(len(h)), "subtitle": f"{len(report.modules)} geprüft", "icon": "🧩"},
        {"title": "Abstrakt", "value": str(len(abstract_ids)),
         "subtitle": ", ".join(abstract_ids) or "alle konkret", "icon": "◌"},
        {"title": "Strukturell", "value": str(len(report.structural_violations)),
         "subtitle": "Verletzungen", "status": status, "icon": "🏗️"},
        {"title": "Verhalten", "value": str(len(report.behavioral_violations)) if report.behavioral else "-",
         "subtitle": "Verletzungen" if report.behavioral else "keine Datensätze", "status": status, "icon": "🧪"},
        {"title": "Dauer", "value": format_duration(report.check_seconds),
         "subtitle": f"gesamt {format_duration(report.total_seconds)}", "icon": "⏱️"},
    ])

    st.markdown("<br>", unsafe_allow_html=True)

    col1, col2 = st.columns(2)
    with col1:
        st.plotly_chart(create_hierarchy_sunburst(h, abstract_ids), use_container_width=True)
    with col2:
        if report.violation_count:
            st.plotly_chart(create_violation_bar(report), use_container_width=True)
        else:
            st.success("✅ Keine Verletzungen")

    if report.behavior:
        st.plotly_chart(create_change_heatmap(report.behavior), use_container_width=True)

    if report.violation_count:
        st.markdown("### Verletzungen")
        st.code("\n".join(
            [str(v) for v in sorted(report.structural_violations, key=lambda v: v.sort_key)]
            + [str(v) for v in sorted(report.behavioral_violations, key=lambda v: v.sort_key)]
        ), language="text")

    # Aufgelöstes Modul
    st.markdown("### Aufgelöstes Modul")
    shown = st.selectbox("Modul", options=h.ids,
                         index=h.ids.index(selection["module"]) if selection["module"] else 0)
    st.code(render_resolved(resolve(h, shown)), language="text")

    st.download_button(
        "📥 Bericht (JSON)",
        data=json.dumps(report_to_dict(report, include_timing=True), indent=2, ensure_ascii=False),
        file_name="rmod_report.json",
        mime="application/json",
    )


if __name__ == "__main__":
    main()
