"""Per-country experiment: spread-only grid, window choice, augmentation.

For every forecast window ``h`` the below-trend dummy at ``t`` is regressed
on the spread at ``t - h``. The window is chosen among the models whose
spread coefficient is significant; the chosen model is then re-estimated
with unemployment and the log stock index at ``t - 1`` and the two added
coefficients are tested jointly.

Every regression for window ``h`` uses the quarters ``first + h .. last`` of
the panel's common range, so the spread-only and augmented fits for a window
always share their sample.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import CRITERIA, MAX_WINDOW, StudyConfig
from .errors import CycleProbeError, NoSignificantModel, SeriesTooShort
from .hp import HpDecomposition, LambdaSweep, RecessionDummy, below_trend_dummy, hp_decompose, lambda_sweep
from .metrics import EvaluationReport, evaluate
from .probit import DesignMatrix, ProbitFit, WaldResult, fit_probit, predict_prob, wald_test
from .stats import describe
from .timeseries import CountryPanel, Quarter, QuarterlySeries, lag, log_series, real_log_gdp, spread

log = logging.getLogger(__name__)

MIN_EFFECTIVE_SAMPLE = 20
SPREAD = "spread"
UNEMPLOYMENT = "unemployment_l1"
STOCK = "log_stock_l1"


@dataclass(frozen=True)
class ModelSpec:
    country: str
    spread_lag: int
    include_unemployment: bool = False
    include_stock_index: bool = False
    lam: float = 1600.0
    lag_structure: str = "single"

    def __post_init__(self):
        if not 1 <= self.spread_lag <= MAX_WINDOW:
            raise ValueError(f"spread_lag must be in 1..{MAX_WINDOW}, got {self.spread_lag}")

    @property
    def spread_columns(self) -> list[str]:
        if self.lag_structure == "joint-lags":
            return [f"{SPREAD}_l{i}" for i in range(1, self.spread_lag + 1)]
        return [f"{SPREAD}_l{self.spread_lag}"]


@dataclass(frozen=True)
class PreparedPanel:
    """A panel cut to its common range with the derived series attached."""

    panel: CountryPanel
    log_gdp: QuarterlySeries
    decomposition: HpDecomposition
    dummy: RecessionDummy
    spread: QuarterlySeries
    log_stock: QuarterlySeries

    @property
    def country(self) -> str:
        return self.panel.country

    @property
    def first(self) -> Quarter:
        return self.log_gdp.start

    @property
    def last(self) -> Quarter:
        return self.log_gdp.end


def prepare(panel: CountryPanel, lam: float = 1600.0) -> PreparedPanel:
    p = panel.aligned()
    y = real_log_gdp(p.nominal_gdp, p.deflator)
    dec = hp_decompose(y, lam)
    return PreparedPanel(
        panel=p,
        log_gdp=y,
        decomposition=dec,
        dummy=below_trend_dummy(dec),
        spread=spread(p.rate_long, p.rate_short),
        log_stock=log_series(p.stock_index),
    )


def _as_prepared(panel, lam) -> PreparedPanel:
    if isinstance(panel, PreparedPanel):
        if panel.decomposition.lam != lam:
            return prepare(panel.panel, lam)
        return panel
    return prepare(panel, lam)


def build_design(prep: PreparedPanel, spec: ModelSpec) -> tuple[DesignMatrix, Quarter]:
    """Design matrix for ``spec`` and the first quarter of its sample."""
    first, last = prep.first + spec.spread_lag, prep.last
    if last < first:
        raise SeriesTooShort(f"{spec.country}: no observations left after lag {spec.spread_lag}")
    cols: dict[str, np.ndarray] = {}
    lags = range(1, spec.spread_lag + 1) if spec.lag_structure == "joint-lags" else [spec.spread_lag]
    for i in lags:
        cols[f"{SPREAD}_l{i}"] = lag(prep.spread, i).restrict(first, last).values
    if spec.include_unemployment:
        cols[UNEMPLOYMENT] = lag(prep.panel.unemployment, 1).restrict(first, last).values
    if spec.include_stock_index:
        cols[STOCK] = lag(prep.log_stock, 1).restrict(first, last).values
    y = prep.dummy.as_series().restrict(first, last).values
    return DesignMatrix.with_intercept(cols, y), first


@dataclass(frozen=True)
class GridRow:
    """One candidate window, either fitted or carrying the reason it failed."""

    spread_lag: int
    p_value: float = float("nan")
    rmse: float = float("nan")
    mae: float = float("nan")
    mape: float = float("nan")
    mcfadden_r2: float = float("nan")
    spec: ModelSpec | None = field(default=None, compare=False)
    fit: ProbitFit | None = field(default=None, compare=False, repr=False)
    evaluation: EvaluationReport | None = field(default=None, compare=False, repr=False)
    sample_start: Quarter | None = None
    error: str | None = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.error is None

    def criterion(self, name: str) -> float:
        return self.mcfadden_r2 if name == "mcfadden" else getattr(self, name)


def spread_p_value(fit: ProbitFit, spec: ModelSpec) -> float:
    """p-value of the spread term: the coefficient's own, or the joint Wald p for several lags."""
    cols = spec.spread_columns
    if len(cols) == 1:
        return float(fit.p_values[fit.index_of(cols[0])])
    return wald_test(fit, cols).chi2_p


def fit_candidate(prep: PreparedPanel, spec: ModelSpec) -> GridRow:
    try:
        design, start = build_design(prep, spec)
        fit = fit_probit(design)
        ev = evaluate(design.response, fit.fitted_probabilities)
    except CycleProbeError as exc:
        log.info("%s lag %d: %s", spec.country, spec.spread_lag, exc)
        return GridRow(spec.spread_lag, spec=spec, error=type(exc).__name__, message=str(exc))
    return GridRow(
        spread_lag=spec.spread_lag,
        p_value=spread_p_value(fit, spec),
        rmse=ev.rmse,
        mae=ev.mae,
        mape=ev.mape,
        mcfadden_r2=fit.mcfadden_r2,
        spec=spec,
        fit=fit,
        evaluation=ev,
        sample_start=start,
    )


def build_candidate_grid(
    panel: CountryPanel | PreparedPanel,
    lam: float = 1600.0,
    max_lag: int = MAX_WINDOW,
    lag_structure: str = "single",
) -> list[GridRow]:
    """Fit the spread-only probit for windows ``1..max_lag``.

    Per-window failures (single-class dummy, separation, ...) are recorded
    on the row and the grid continues.
    """
    prep = _as_prepared(panel, lam)
    n_eff = len(prep.log_gdp) - max_lag
    if n_eff < MIN_EFFECTIVE_SAMPLE:
        raise SeriesTooShort(
            f"{prep.country}: {n_eff} observations after lag {max_lag}, "
            f"need at least {MIN_EFFECTIVE_SAMPLE}"
        )
    return [
        fit_candidate(prep, ModelSpec(prep.country, h, lam=lam, lag_structure=lag_structure))
        for h in range(1, max_lag + 1)
    ]


@dataclass(frozen=True)
class SelectionReport:
    country: str
    rows: tuple[GridRow, ...]
    selected_lag: int
    selection_rule: str
    significance_threshold: float
    relaxed: bool = False

    @property
    def selected(self) -> GridRow:
        return next(r for r in self.rows if r.spread_lag == self.selected_lag and r.ok)


def select_window(
    rows: Sequence[GridRow],
    significance_threshold: float = 0.01,
    criterion: str = "rmse",
    country: str = "",
) -> SelectionReport:
    """Best significant window by ``criterion``; ties go to the shorter window.

    ``"mcfadden"`` is maximised, the error criteria minimised.
    """
    if criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}")
    if not rows:
        raise ValueError("no candidate rows")
    passing = [r for r in rows if r.ok and r.p_value <= significance_threshold]
    if not passing:
        raise NoSignificantModel(
            f"{country or 'grid'}: no window significant at {significance_threshold:g}"
        )
    sign = -1.0 if criterion == "mcfadden" else 1.0
    best = min(passing, key=lambda r: (sign * r.criterion(criterion), r.spread_lag))
    verb = "max" if criterion == "mcfadden" else "min"
    return SelectionReport(
        country=country,
        rows=tuple(rows),
        selected_lag=best.spread_lag,
        selection_rule=f"{verb} {criterion} among p <= {significance_threshold:g}",
        significance_threshold=significance_threshold,
    )


def select_with_relaxation(
    rows: Sequence[GridRow],
    significance_threshold: float = 0.01,
    relaxed_threshold: float = 0.10,
    criterion: str = "rmse",
    country: str = "",
) -> SelectionReport:
    """:func:`select_window`, retrying once at ``relaxed_threshold`` and flagging it."""
    try:
        return select_window(rows, significance_threshold, criterion, country)
    except NoSignificantModel:
        if relaxed_threshold <= significance_threshold:
            raise
        log.warning(
            "%s: nothing significant at %g, relaxing to %g",
            country, significance_threshold, relaxed_threshold,
        )
        rep = select_window(rows, relaxed_threshold, criterion, country)
        return SelectionReport(
            rep.country, rep.rows, rep.selected_lag,
            rep.selection_rule + " (relaxed)", rep.significance_threshold, relaxed=True,
        )


@dataclass(frozen=True)
class AugmentedResult:
    spec: ModelSpec
    fit: ProbitFit
    evaluation: EvaluationReport
    wald: WaldResult
    baseline_fit: ProbitFit
    sample_start: Quarter
    wald_level: float = 0.05

    @property
    def augmentation_significant(self) -> bool:
        return self.wald.chi2_p <= self.wald_level

    def __iter__(self):
        # allows ``fit, evaluation, wald = fit_augmented(...)``
        return iter((self.fit, self.evaluation, self.wald))


def fit_augmented(
    panel: CountryPanel | PreparedPanel,
    selected_lag: int,
    lam: float = 1600.0,
    lag_structure: str = "single",
    wald_level: float = 0.05,
) -> AugmentedResult:
    """Spread at the chosen window plus unemployment and log stock index at ``t - 1``.

    The spread-only model is re-fitted on the same sample so the two
    likelihoods are directly comparable.
    """
    prep = _as_prepared(panel, lam)
    spec = ModelSpec(
        prep.country, selected_lag, include_unemployment=True, include_stock_index=True,
        lam=lam, lag_structure=lag_structure,
    )
    design, start = build_design(prep, spec)
    fit = fit_probit(design)
    base_design, _ = build_design(
        prep, ModelSpec(prep.country, selected_lag, lam=lam, lag_structure=lag_structure)
    )
    return AugmentedResult(
        spec=spec,
        fit=fit,
        evaluation=evaluate(design.response, fit.fitted_probabilities),
        wald=wald_test(fit, [UNEMPLOYMENT, STOCK]),
        baseline_fit=fit_probit(base_design),
        sample_start=start,
        wald_level=wald_level,
    )


def probability_path(
    fit: ProbitFit, panel: CountryPanel | PreparedPanel, spec: ModelSpec
) -> QuarterlySeries:
    """In-sample predicted probability of a below-trend quarter, dated by quarter."""
    prep = _as_prepared(panel, spec.lam)
    design, start = build_design(prep, spec)
    return QuarterlySeries(start, predict_prob(fit, design.observations))


@dataclass(frozen=True)
class CountrySection:
    country: str
    prepared: PreparedPanel
    sweep: LambdaSweep
    grid: list[GridRow]
    selection: SelectionReport | None
    augmented: AugmentedResult | None
    path: QuarterlySeries | None
    summary: dict[str, dict]
    notes: tuple[str, ...] = ()
    error: str | None = None
    message: str = ""


@dataclass(frozen=True)
class CountryFailure:
    country: str
    error: str
    message: str


@dataclass(frozen=True)
class StudyReport:
    config: StudyConfig
    sections: list[CountrySection | CountryFailure]

    @property
    def completed(self) -> list[CountrySection]:
        return [s for s in self.sections if isinstance(s, CountrySection)]

    @property
    def failed(self) -> list[CountryFailure]:
        return [s for s in self.sections if isinstance(s, CountryFailure)]


def summary_block(prep: PreparedPanel) -> dict[str, dict]:
    """Descriptive statistics of the explanatory variables over the common range."""
    p = prep.panel
    return {
        "rate_long_1y": describe(p.rate_long.values),
        "rate_short_3m": describe(p.rate_short.values),
        "unemployment": describe(p.unemployment.values),
        "log_stock_index": describe(prep.log_stock.values),
        "spread": describe(prep.spread.values),
    }


def run_country(panel: CountryPanel, config: StudyConfig) -> CountrySection:
    prep = prepare(panel, config.lam)
    sweep = lambda_sweep(prep.log_gdp, config.lambda_sweep)
    grid = build_candidate_grid(prep, config.lam, config.max_lag, config.lag_structure)
    notes = []
    selection = augmented = path = None
    try:
        selection = select_with_relaxation(
            grid, config.significance_threshold, config.relaxed_threshold,
            config.selection_criterion, prep.country,
        )
        if selection.relaxed:
            notes.append(
                f"no window significant at {config.significance_threshold:g}; "
                f"selected at relaxed level {config.relaxed_threshold:g}, interpret with caution"
            )
        augmented = fit_augmented(
            prep, selection.selected_lag, config.lam, config.lag_structure, config.wald_level
        )
        if not augmented.augmentation_significant:
            notes.append(
                f"joint Wald test of unemployment and stock index not significant at "
                f"{config.wald_level:g} (chi2 p = {augmented.wald.chi2_p:.3f}); "
                "augmented model reported anyway"
            )
        path = probability_path(augmented.fit, prep, augmented.spec)
    except CycleProbeError as exc:
        return CountrySection(
            prep.country, prep, sweep, grid, selection, augmented, path, summary_block(prep),
            tuple(notes), type(exc).__name__, str(exc),
        )
    return CountrySection(
        prep.country, prep, sweep, grid, selection, augmented, path, summary_block(prep), tuple(notes)
    )


def run_full_study(panels: Sequence[CountryPanel], config: StudyConfig | None = None) -> StudyReport:
    """Run every country independently; one country's failure does not stop the rest."""
    config = config or StudyConfig()
    if not panels:
        raise ValueError("at least one panel is required")
    sections: list[CountrySection | CountryFailure] = []
    for panel in panels:
        try:
            sections.append(run_country(panel, config))
        except CycleProbeError as exc:
            log.warning("%s failed: %s", panel.country, exc)
            sections.append(CountryFailure(panel.country, type(exc).__name__, str(exc)))
    return StudyReport(config, sections)
