# -*- coding: utf-8 -*-
"""
PluralWV Output Writers
Deterministic CSV / JSON rendering and rich tables for the command line
"""
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import pandas as pd
import typer
from rich.console import Console
from rich.table import Table


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    TABLE = "table"


# Column order is part of the output contract
COLUMNS = {
    "weakvalue": ["re", "im", "ab", "prob"],
    "sweep": ["alpha_rad", "beta_rad", "re_aw", "im_aw", "ab_aw", "prob", "ok"],
    "anomaly": ["alpha_lo", "alpha_hi", "d_re", "d_prob", "regime", "ok"],
    "syserr": ["beta_true", "alpha_defl", "estimator", "measured", "beta_hat", "err", "ok"],
    "invert": ["alpha", "im_target", "branch", "beta_root", "ok"],
    "oracle": ["tau", "dq_exact", "dq_first", "dp_exact", "dp_first", "weakness", "ok"],
}

FLOAT_FORMAT = "%.17e"


def to_frame(records: Iterable[Dict[str, Any]], subcommand: str) -> pd.DataFrame:
    """Rows in the fixed column order of a subcommand"""
    return pd.DataFrame(list(records), columns=COLUMNS[subcommand])


def render_csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="nan")


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if hasattr(value, "item"):  # numpy scalars
        return _json_safe(value.item())
    return value


def render_json(payload: Any) -> str:
    return json.dumps(_json_safe(payload), indent=2, allow_nan=False) + "\n"


def render_table(df: pd.DataFrame, title: str) -> str:
    """rich table of the frame, captured as text"""
    table = Table(title=title, show_lines=False)
    for column in df.columns:
        table.add_column(column, justify="left" if df[column].dtype == object else "right")

    for _, row in df.iterrows():
        table.add_row(*[f"{v:.10g}" if isinstance(v, float) else str(v) for v in row])

    console = Console(record=True, width=160)
    with console.capture() as capture:
        console.print(table)
    return capture.get()


def emit_text(text: str, output: Optional[Path] = None):
    """Write UTF-8, LF-terminated text to a file or standard output"""
    if output is None:
        typer.echo(text, nl=False)
        return
    with open(output, "w", encoding="utf-8", newline="") as f:
        f.write(text)


def emit_rows(
    records: List[Dict[str, Any]],
    subcommand: str,
    fmt: OutputFormat,
    output: Optional[Path] = None,
    title: str = "",
):
    """Render rows of a subcommand in the requested format"""
    df = to_frame(records, subcommand)
    if fmt is OutputFormat.CSV:
        text = render_csv(df)
    elif fmt is OutputFormat.JSON:
        text = render_json(df.to_dict(orient="records"))
    else:
        text = render_table(df, title or subcommand)
    emit_text(text, output)
