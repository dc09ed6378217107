"""Text formatters for reports and output tables."""
import math
from typing import Dict, Iterable, List, Optional

import pandas as pd

from ..asymptotics.report import AsymptoticReport, ConstantEstimate

REPORT_COLUMNS = [
    ("law id", "law_id", 20),
    ("pred exp", "predicted_exponent", 9),
    ("fit exp", "fitted_exponent", 9),
    ("se", "stderr_exponent", 8),
    ("pred const", "predicted_constant", 11),
    ("fit const", "fitted_constant", 11),
    ("se", "stderr_constant", 9),
    ("window", None, 21),
    ("verdict", "verdict", 0),
]


def format_number(value, digits: int = 4) -> str:
    """Compact number, '-' for missing values."""
    if value is None:
        return "-"
    try:
        number = float(value)
    except (TypeError, ValueError):
        return str(value)
    if math.isnan(number):
        return "-"
    return f"{number:.{digits}g}"


def _window(row: dict) -> str:
    if row.get("x_lo") is None or row.get("x_hi") is None:
        return "-"
    return f"[{format_number(row['x_lo'], 3)}, {format_number(row['x_hi'], 3)}]"


def format_table(headers: List[str], rows: Iterable[List[str]], widths: List[int]) -> str:
    """Left-aligned fixed-width table; a width of 0 means unpadded."""
    def line(cells):
        return "  ".join(c.ljust(w) if w else c for c, w in zip(cells, widths)).rstrip()

    out = [line(headers), line(["-" * max(w, len(h)) for h, w in zip(headers, widths)])]
    out += [line(r) for r in rows]
    return "\n".join(out)


def format_report(
    report: AsymptoticReport,
    constants: Optional[Dict[str, ConstantEstimate]] = None,
) -> str:
    """
    Human-readable verification report.

    One row per law (id, predicted and fitted exponent and constant with
    standard errors, fit window, verdict), then the measured constants and
    the summary line.
    """
    params = report.params
    tol = report.tolerances
    lines = [
        "SUPREMA verification report",
        f"alpha = {params.alpha:g}  c_plus = {params.c_plus:g}  c_minus = {params.c_minus:g}  "
        f"rho = {params.rho:.6g}  A = {params.tail_A:.6g}",
        f"tolerances: exponent {tol.exponent:g}, constant {tol.constant:.0%}, "
        f"meander constant {tol.meander_constant:.0%}, + {tol.stderr_multiplier:g} stderr",
        "",
    ]

    rows = []
    for entry in report.entries:
        row = entry.as_row()
        cells = []
        for _, key, _ in REPORT_COLUMNS:
            if key is None:
                cells.append(_window(row))
            elif key in ("law_id", "verdict"):
                cells.append(str(row[key]))
            else:
                cells.append(format_number(row[key]))
        rows.append(cells)
    lines.append(format_table(
        [c[0] for c in REPORT_COLUMNS], rows, [c[2] for c in REPORT_COLUMNS]
    ))

    if constants:
        lines += ["", "constants (95% interval):"]
        for name, est in constants.items():
            lo, hi = est.ci
            extra = ""
            if est.relative_to_structural is not None:
                extra = f"  vs structural {format_number(est.structural, 6)}: {est.relative_to_structural:+.2%}"
            lines.append(
                f"  {name:<6} {format_number(est.value, 6):>10}  [{format_number(lo)}, {format_number(hi)}]"
                f"  from {est.law_id}{extra}"
            )

    counts = report.counts()
    lines += [
        "",
        f"{counts['pass']} pass, {counts['fail']} fail, {counts['skipped']} skipped: "
        + ("PASSED" if report.passed else "FAILED"),
    ]
    return "\n".join(lines) + "\n"


def constants_frame(constants: Dict[str, ConstantEstimate]) -> pd.DataFrame:
    rows = []
    for name, est in constants.items():
        lo, hi = est.ci
        rows.append({
            "name": name,
            "value": est.value,
            "stderr": est.stderr,
            "ci_lo": lo,
            "ci_hi": hi,
            "law_id": est.law_id,
            "structural": est.structural,
        })
    return pd.DataFrame(rows, columns=["name", "value", "stderr", "ci_lo", "ci_hi", "law_id", "structural"])
