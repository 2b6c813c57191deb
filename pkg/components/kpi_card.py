"""
Wiederverwendbare KPI-Card Komponente.

Styled KPI-Karten mit Wert, Untertitel und Statusfarbe.
"""

import streamlit as st
from typing import Dict, List, Optional
import sys
import os

# Import settings
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config.settings import COLORS, KPI_CARD_HEIGHT


def build_kpi_html(title: str, value: str, subtitle: str = "",
                   border_color: Optional[str] = None, icon: str = "") -> str:
    """
    HTML einer KPI-Card (ohne Streamlit, testbar).

    Args:
        title: Überschrift der Card
        value: Hauptwert (bereits formatiert)
        subtitle: Zusatzinformation unter dem Wert
        border_color: Farbe des linken Rands (default: neutral)
        icon: Optional Emoji/Icon

    Returns:
        HTML-String
    """
    border_color = border_color or COLORS["card_border"]

    container_style = f"""
        background: {COLORS["card_bg"]};
        border-left: 4px solid {border_color};
        padding: 1.5rem;
        border-radius: 8px;
        box-shadow: 0 2px 4px rgba(0,0,0,0.1);
        min-height: {KPI_CARD_HEIGHT}px;
    """

    return f"""
    <div style="{container_style}">
        <div style="color: {COLORS["text_secondary"]}; font-size: 0.85rem; font-weight: 500; text-transform: uppercase; letter-spacing: 0.5px; margin-bottom: 0.5rem;">
            {icon} {title}
        </div>
        <div style="color: {COLORS["text_primary"]}; font-size: 2rem; font-weight: 700; margin: 0.5rem 0;">
            {value}
        </div>
        <div style="color: {COLORS["text_secondary"]}; font-size: 0.85rem;">
            {subtitle}
        </div>
    </div>
    """


def kpi_card(
    title: str,
    value: str,
    subtitle: str = "",
    status: Optional[str] = None,
    icon: str = ""
):
    """
    Rendert eine KPI-Card.

    Args:
        title: Überschrift der Card
        value: Hauptwert (bereits formatiert)
        subtitle: Zusatzinformation unter dem Wert
        status: Randfarbe, z.B. aus get_status_color()
        icon: Optional Emoji/Icon
    """
    with st.container():
        st.markdown(build_kpi_html(title, value, subtitle, status, icon), unsafe_allow_html=True)


def kpi_row(kpis: List[Dict]):
    """
    Rendert eine Reihe von KPI-Cards.

    Args:
        kpis: Liste von Dicts mit kpi_card-Parametern
    """
    cols = st.columns(len(kpis))
    for col, kpi in zip(cols, kpis):
        with col:
            kpi_card(**kpi)
