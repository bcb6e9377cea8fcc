# -*- coding: utf-8 -*-
"""
PluralWV Landmark Report
Scenario numbers of the 0.002 rad deflection study, as a table and a markdown file
"""
from datetime import date
from pathlib import Path
from typing import Optional, Union

import pandas as pd
from rich.console import Console
from rich.table import Table

from pluralwv.analysis.estimation import EstimatorKind, sensitivity_deficit, systematic_error
from pluralwv.analysis.sweep import find_sensitivity_peak
from pluralwv.core.weak_value import SchemeConfig, SchemeKind, closed_form

console = Console()

# ---------------------------------------------------------------
# SCENARIOS
# ---------------------------------------------------------------
DEFLECTION = 0.002

WEAK_VALUE_SCENARIOS = {
    "scheme_a_real": SchemeConfig(SchemeKind.A, alpha=DEFLECTION),
    "scheme_b_imaginary": SchemeConfig(SchemeKind.B, beta=DEFLECTION),
    "scheme_c_plural": SchemeConfig(SchemeKind.C, alpha=DEFLECTION, beta=DEFLECTION),
    "scheme_c_small_p1": SchemeConfig(SchemeKind.C, alpha=0.0002, beta=DEFLECTION),
}

PEAK_SCENARIOS = [0.0002, 0.002, 0.02]


def collect_landmarks(deflection: float = DEFLECTION) -> pd.DataFrame:
    """
    Evaluate every landmark quantity

    Returns:
        DataFrame with one row per landmark: group, name, value, reference
    """
    rows = []

    for name, cfg in WEAK_VALUE_SCENARIOS.items():
        wv = closed_form(cfg)
        for quantity, value in (("re", wv.re), ("im", wv.im), ("ab", wv.ab), ("prob", wv.prob)):
            rows.append({"group": "weak_value", "name": f"{name}.{quantity}", "value": value, "reference": None})

    for beta in PEAK_SCENARIOS:
        rows.append({
            "group": "sensitivity_peak",
            "name": f"alpha_peak(beta={beta:g})",
            "value": find_sensitivity_peak(beta),
            "reference": beta,
        })

    for kind in EstimatorKind:
        record = systematic_error(deflection, deflection, kind)
        rows.append({"group": "systematic_error", "name": f"beta_hat.{kind.value}",
                     "value": record.beta_hat, "reference": deflection})
        rows.append({"group": "systematic_error", "name": f"err.{kind.value}",
                     "value": record.err, "reference": 0.0})

    deficit = sensitivity_deficit(deflection, deflection)
    rows.append({"group": "sensitivity", "name": "design_cot_beta", "value": deficit.design, "reference": None})
    rows.append({"group": "sensitivity", "name": "im_gap", "value": deficit.im_gap, "reference": None})
    rows.append({"group": "sensitivity", "name": "ab_gap", "value": deficit.ab_gap, "reference": None})

    return pd.DataFrame(rows, columns=["group", "name", "value", "reference"])


def display_landmarks(df: pd.DataFrame):
    """Pretty print the landmarks"""
    table = Table(title="Plural Weak Value Landmarks", show_lines=True)

    table.add_column("Group", style="cyan", no_wrap=True)
    table.add_column("Landmark", style="blue")
    table.add_column("Value", justify="right", style="green")
    table.add_column("Reference", justify="right", style="dim")

    for _, row in df.iterrows():
        reference = "" if pd.isna(row["reference"]) else f"{row['reference']:.6g}"
        table.add_row(row["group"], row["name"], f"{row['value']:.9g}", reference)

    console.print("\n")
    console.print(table)


def save_report(df: pd.DataFrame, path: Optional[Union[str, Path]] = None) -> Path:
    """Markdown report of the landmarks"""
    path = Path(path) if path is not None else Path(f"docs/landmarks/landmarks_{date.today():%Y%m%d}.md")
    path.parent.mkdir(parents=True, exist_ok=True)

    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("# Plural Weak Value Landmarks\n\n")
        f.write(f"Deflection: {DEFLECTION} rad on both polarizers.\n\n")
        f.write(df.to_markdown(index=False, floatfmt=".9g"))
        f.write("\n\n")
        f.write("err.ab_based and err.prob_based coincide because P (1 + |A_w|^2) = 1.\n")

    console.print(f"[green]Report saved: {path}[/green]")
    return path


if __name__ == "__main__":
    console.print("[bold cyan]PluralWV Landmarks[/bold cyan]\n")
    df = collect_landmarks()
    display_landmarks(df)
    save_report(df)
