"""Serialise study results as CSV figure data and text/CSV tables.

Figure data (trend, cycle, probability paths) is written at full double
precision. Model-selection tables use 3 decimals, augmented-model tables 2,
summary statistics 2. Output is deterministic: no timestamps, stable
ordering, ``\\n`` line endings.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .hp import HpDecomposition, LambdaSweep, RecessionDummy
from .metrics import MAPE_CONVENTION
from .pipeline import (
    AugmentedResult, CountryFailure, CountrySection, GridRow, SelectionReport, StudyReport,
)
from .io import format_float
from .stats import STAT_ORDER
from .timeseries import QuarterlySeries

GRID_DECIMALS = 3
AUGMENTED_DECIMALS = 2
SUMMARY_DECIMALS = 2


def fmt(x, decimals: int) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, int):
        return str(x)
    if math.isnan(x):
        return "undefined"
    return f"{x:.{decimals}f}"


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def render_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    cols = [list(map(str, c)) for c in zip(header, *rows)] if rows else [[h] for h in header]
    widths = [max(len(v) for v in c) for c in cols]
    line = lambda cells: "  ".join(str(c).rjust(w) for c, w in zip(cells, widths)).rstrip()
    out = [line(header), line(["-" * w for w in widths])]
    out += [line(r) for r in rows]
    return "\n".join(out) + "\n"


def preamble(significance: float | str, relaxed: float | None = None) -> str:
    lines = [
        f"cycleprobe {__version__}",
        f"MAPE convention: {MAPE_CONVENTION} (zero actuals excluded, percent scale)",
        f"significance threshold: {significance}",
    ]
    if relaxed is not None:
        lines.append(f"relaxed threshold (used only when nothing passes): {relaxed:g}")
    return "\n".join(lines) + "\n"


# figure data ---------------------------------------------------------------

def decomposition_rows(series: QuarterlySeries, dec: HpDecomposition, dummy: RecessionDummy):
    for k, q in enumerate(series.quarters()):
        yield [
            str(q), format_float(series.values[k]), format_float(dec.trend.values[k]),
            format_float(dec.cycle.values[k]), int(dummy.values[k]),
        ]


def write_decomposition(path: Path, series, dec, dummy) -> Path:
    return write_csv(
        path, ["quarter", "series", "trend", "cycle", "below_trend"],
        decomposition_rows(series, dec, dummy),
    )


def _lam_label(lam: float) -> str:
    return f"{lam:g}"


def write_sweep(directory: Path, sweep: LambdaSweep) -> list[Path]:
    first = sweep.decompositions[0].cycle
    header = ["quarter"] + [f"cycle_lambda_{_lam_label(d.lam)}" for d in sweep.decompositions]
    rows = (
        [str(q)] + [format_float(d.cycle.values[k]) for d in sweep.decompositions]
        for k, q in enumerate(first.quarters())
    )
    labels = [_lam_label(l) for l in sweep.lambdas]
    agree_rows = (
        [labels[i]] + [f"{sweep.agreement[i, j]:.4f}" for j in range(len(labels))]
        for i in range(len(labels))
    )
    return [
        write_csv(directory / "lambda_sweep.csv", header, rows),
        write_csv(directory / "lambda_agreement.csv", ["lambda"] + labels, agree_rows),
    ]


def write_probability_path(path: Path, prob: QuarterlySeries, dec: HpDecomposition, dummy) -> Path:
    cyc = dec.cycle.restrict(prob.start, prob.end)
    dm = dummy.as_series().restrict(prob.start, prob.end)
    rows = (
        [str(q), format_float(p), format_float(c), int(d)]
        for (q, p), c, d in zip(prob, cyc.values, dm.values)
    )
    return write_csv(path, ["quarter", "probability", "cycle", "below_trend"], rows)


# tables --------------------------------------------------------------------

GRID_HEADER = [
    "country", "spread", "forecast_window", "selected", "p_value",
    "rmse", "mae", "mape", "mcfadden_r2", "status",
]


def grid_rows(country: str, rows: Sequence[GridRow], selection: SelectionReport | None):
    d = GRID_DECIMALS
    for r in rows:
        star = "*" if selection is not None and selection.selected_lag == r.spread_lag and r.ok else ""
        status = "ok" if r.ok else r.error
        yield [
            country, "1y-3m", r.spread_lag, star, fmt(r.p_value, d), fmt(r.rmse, d),
            fmt(r.mae, d), fmt(r.mape, d), fmt(r.mcfadden_r2, d), status,
        ]


WALD_HEADER = [
    "country", "forecast_window", "restricted", "chi2_stat", "chi2_p",
    "f_stat", "f_p", "df_num", "df_denom", "significant",
]


def wald_row(country: str, aug: AugmentedResult):
    w, d = aug.wald, GRID_DECIMALS
    return [
        country, aug.spec.spread_lag, "+".join(w.restricted), fmt(w.chi2_stat, d), fmt(w.chi2_p, d),
        fmt(w.f_stat, d), fmt(w.f_p, d), w.df_num, w.df_denom, fmt(aug.augmentation_significant, d),
    ]


AUGMENTED_HEADER = [
    "country", "spread", "forecast_window", "rmse", "mae", "mape", "mcfadden_r2",
    "loglik_spread_only", "loglik_augmented",
]


def augmented_row(country: str, aug: AugmentedResult):
    e, d = aug.evaluation, AUGMENTED_DECIMALS
    return [
        country, "1y-3m", aug.spec.spread_lag, fmt(e.rmse, d), fmt(e.mae, d), fmt(e.mape, d),
        fmt(aug.fit.mcfadden_r2, d), fmt(aug.baseline_fit.log_likelihood, d),
        fmt(aug.fit.log_likelihood, d),
    ]


SUMMARY_HEADER = ["country", "variable", *STAT_ORDER]


def summary_rows(country: str, summary: dict[str, dict]):
    for var, st in summary.items():
        yield [country, var] + [fmt(st[k], SUMMARY_DECIMALS) for k in STAT_ORDER]


# commands ------------------------------------------------------------------

def write_grid_outputs(out: Path, sections, significance, relaxed=None) -> str:
    rows = []
    for sec in sections:
        rows += list(grid_rows(sec.country, sec.grid, sec.selection))
    write_csv(out / "table2_grid.csv", GRID_HEADER, rows)
    text = preamble(significance, relaxed) + "\n" + render_table(GRID_HEADER, rows)
    text += "\n* selected forecast window\n"
    for sec in sections:
        for note in _selection_notes(sec):
            text += f"note [{sec.country}]: {note}\n"
    (out / "table2_grid.txt").write_text(text, encoding="utf-8")
    return text


def _selection_notes(sec) -> list[str]:
    notes = []
    sel = getattr(sec, "selection", None)
    if sel is not None:
        notes.append(f"rule: {sel.selection_rule}")
        if sel.relaxed:
            notes.append("RELAXED significance threshold; interpret with caution")
    err = getattr(sec, "error", None)
    if err:
        notes.append(f"{err}: {sec.message}")
    return notes


def write_summary_outputs(out: Path, items: Sequence[tuple[str, dict]]) -> str:
    rows = []
    for country, summary in items:
        rows += list(summary_rows(country, summary))
    write_csv(out / "table1_summary.csv", SUMMARY_HEADER, rows)
    text = render_table(SUMMARY_HEADER, rows)
    text += "\nskewness/kurtosis are moment ratios (kurtosis not in excess form); "
    text += "'undefined' marks a constant series\n"
    (out / "table1_summary.txt").write_text(text, encoding="utf-8")
    return text


def write_study(report: StudyReport, out: Path) -> str:
    """Write every table and figure file of a study; returns the text report."""
    cfg = report.config
    out.mkdir(parents=True, exist_ok=True)
    done = report.completed
    parts = [preamble(f"{cfg.significance_threshold:g}", cfg.relaxed_threshold)]
    parts.append(f"lambda: {cfg.lam:g}; sweep: {', '.join(_lam_label(l) for l in cfg.lambda_sweep)}")
    parts.append(f"selection criterion: {cfg.selection_criterion}; lag structure: {cfg.lag_structure}")
    parts.append(
        "lambda robustness: share of quarters with matching cycle sign across the sweep\n"
    )

    for sec in done:
        d = out / sec.country
        prep = sec.prepared
        write_decomposition(d / "decomposition.csv", prep.log_gdp, prep.decomposition, prep.dummy)
        write_sweep(d, sec.sweep)
        write_csv(d / "grid.csv", GRID_HEADER, grid_rows(sec.country, sec.grid, sec.selection))
        write_csv(d / "summary.csv", SUMMARY_HEADER, summary_rows(sec.country, sec.summary))
        if sec.path is not None:
            write_probability_path(d / "probability_path.csv", sec.path, prep.decomposition, prep.dummy)

    parts.append("Summary statistics\n")
    parts.append(write_summary_outputs(out, [(s.country, s.summary) for s in done]))

    parts.append("Spread-only forecasting models\n")
    grid_text = write_grid_outputs(out, done, f"{cfg.significance_threshold:g}", cfg.relaxed_threshold)
    parts.append(grid_text.split("\n\n", 1)[1])

    augmented = [s for s in done if s.augmented is not None]
    wald_rows = [wald_row(s.country, s.augmented) for s in augmented]
    aug_rows = [augmented_row(s.country, s.augmented) for s in augmented]
    write_csv(out / "table3_wald.csv", WALD_HEADER, wald_rows)
    write_csv(out / "table4_augmented.csv", AUGMENTED_HEADER, aug_rows)
    parts.append(
        f"Joint Wald test, unemployment = stock index = 0 "
        f"(level {cfg.wald_level:g}); F = chi2 / q against F(q, n - k)\n"
    )
    parts.append(render_table(WALD_HEADER, wald_rows))
    parts.append("Augmented models\n")
    parts.append(render_table(AUGMENTED_HEADER, aug_rows))

    agree = []
    for s in done:
        labels = [_lam_label(l) for l in s.sweep.lambdas]
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                agree.append([s.country, labels[i], labels[j], f"{s.sweep.agreement[i, j]:.4f}"])
    parts.append("Cycle sign agreement across smoothing parameters\n")
    parts.append(render_table(["country", "lambda_a", "lambda_b", "sign_agreement"], agree))

    notes = []
    for s in done:
        notes += [f"[{s.country}] {n}" for n in s.notes]
    failures = [[f.country, f.error, f.message] for f in report.failed]
    failures += [[s.country, s.error, s.message] for s in done if s.error]
    write_csv(out / "errors.csv", ["country", "error", "message"], failures)
    if notes:
        parts.append("Notes\n" + "\n".join(notes) + "\n")
    if failures:
        parts.append("Failures\n" + render_table(["country", "error", "message"], failures))
    text = "\n".join(parts)
    (out / "study.txt").write_text(text, encoding="utf-8")
    return text
