"""
Sidebar des rmod-Dashboards.

Auswahl von Workspace, Modul und Datensatz-Verzeichnis.
"""

import streamlit as st
from typing import Dict, List, Optional
import sys
import os

# Import settings
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config.settings import SAMPLE_DATASETS_PATH, SAMPLE_WORKSPACE_PATH

ALL_MODULES = "(alle Kanten)"


def initialize_selection():
    """Setzt Session-State-Defaults vor dem Rendern."""
    if "workspace_path" not in st.session_state:
        st.session_state["workspace_path"] = SAMPLE_WORKSPACE_PATH

    if "data_path" not in st.session_state:
        st.session_state["data_path"] = SAMPLE_DATASETS_PATH

    if "selected_module" not in st.session_state:
        st.session_state["selected_module"] = ALL_MODULES


def render_selection(module_ids: Optional[List[str]] = None) -> Dict[str, Optional[str]]:
    """
    Rendert die Sidebar und liefert die Auswahl.

    Args:
        module_ids: IDs der Module im geladenen Workspace (None = noch nicht geladen)

    Returns:
        Dict mit workspace, module (None = alle Kanten), affected (Nachfahren mitprüfen)
        und data (None = nur strukturell)
    """
    initialize_selection()

    with st.sidebar:
        st.markdown("### 📁 Workspace")
        workspace = st.text_input("Modulverzeichnis", key="workspace_path")

        st.markdown("### 🧩 Modul")
        options = [ALL_MODULES] + list(module_ids or [])
        if st.session_state["selected_module"] not in options:
            st.session_state["selected_module"] = ALL_MODULES
        module = st.selectbox("Prüfen gegen Parent", options=options, key="selected_module")
        affected = st.checkbox("Inklusive Nachfahren", value=False, key="affected_enabled",
                               disabled=module == ALL_MODULES,
                               help="Nach einer Restriktionsänderung alle betroffenen Kanten neu prüfen")

        st.markdown("### 🧪 Verhaltensprüfung")
        behavioral = st.checkbox("Mit Datensätzen prüfen", value=True, key="behavioral_enabled")
        data_path = st.text_input("Datensatz-Verzeichnis", key="data_path", disabled=not behavioral)

        st.markdown("---")
        if st.button("🔄 Neu laden", use_container_width=True):
            st.cache_data.clear()
            st.rerun()

    return {
        "workspace": workspace.strip(),
        "module": None if module == ALL_MODULES else module,
        "affected": affected and module != ALL_MODULES,
        "data": data_path.strip() if behavioral and data_path.strip() else None,
    }
