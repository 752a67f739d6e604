import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cycleprobe import synthetic
from cycleprobe.config import CRITERIA, StudyConfig
from cycleprobe.errors import EmptyIntersection, NoSignificantModel, SeriesTooShort
from cycleprobe.pipeline import (
    GridRow, ModelSpec, build_candidate_grid, build_design, fit_augmented, prepare,
    probability_path, run_country, run_full_study, select_window, select_with_relaxation,
    summary_block,
)
from cycleprobe.probit import DesignMatrix, fit_probit, std_normal_cdf
from cycleprobe.timeseries import CountryPanel, Quarter, QuarterlySeries


def row(lag, p, rmse, mae, mape, r2):
    return GridRow(lag, p, rmse, mae, mape, r2)


# published grid blocks: (lag, p-value, RMSE, MAE, MAPE, McFadden R2), starred lag, threshold
PUBLISHED_GRIDS = {
    "france": ([row(2, 0.00, 0.427, 0.365, 18.280, 0.218), row(3, 0.00, 0.404, 0.329, 16.605, 0.284),
                row(4, 0.00, 0.446, 0.402, 20.468, 0.151)], 3, 0.01),
    "germany": ([row(2, 0.00, 0.455, 0.414, 20.966, 0.130), row(3, 0.00, 0.454, 0.412, 20.982, 0.136)],
                3, 0.01),
    "italy": ([row(1, 0.00, 0.460, 0.426, 21.527, 0.114), row(2, 0.00, 0.458, 0.424, 21.426, 0.116),
               row(3, 0.00, 0.465, 0.435, 21.926, 0.097)], 2, 0.01),
    "sweden": ([row(2, 0.00, 0.462, 0.426, 21.375, 0.108), row(3, 0.00, 0.455, 0.416, 20.968, 0.125),
                row(4, 0.00, 0.431, 0.377, 19.133, 0.187), row(5, 0.00, 0.408, 0.345, 17.597, 0.237),
                row(6, 0.00, 0.379, 0.303, 15.418, 0.310)], 6, 0.01),
    "uk": ([row(2, 0.07, 0.487, 0.475, 23.820, 0.036), row(3, 0.05, 0.486, 0.471, 23.557, 0.043)],
           3, 0.10),
}


@pytest.fixture(scope="module")
def planted():
    return synthetic.planted_signal_panel()


@pytest.fixture(scope="module")
def planted_grid(planted):
    return build_candidate_grid(planted)


# grid ----------------------------------------------------------------------

def test_bundled_grid_rows(bundled):
    for panel in bundled:
        grid = build_candidate_grid(panel)
        assert [r.spread_lag for r in grid] == [1, 2, 3, 4, 5, 6]
        for r in grid:
            assert r.ok
            assert all(math.isfinite(v) for v in (r.p_value, r.rmse, r.mae, r.mape))
            assert 0 <= r.mcfadden_r2 < 1
            assert r.rmse >= r.mae


def test_grid_samples_start_after_window(bundled):
    grid = build_candidate_grid(bundled[0])
    for r in grid:
        assert r.sample_start == Quarter(1994, 1) + r.spread_lag
        assert r.fit.nobs == 61 - r.spread_lag


def test_noise_spread_has_no_significant_window():
    # on 200 seeds 95.5% of noise panels had every p-value above 0.01; this seed is one of them
    grid = build_candidate_grid(synthetic.noise_spread_panel(seed=synthetic.DEFAULT_SEED))
    assert all(r.p_value > 0.01 for r in grid)
    with pytest.raises(NoSignificantModel):
        select_window(grid)


def test_planted_signal_lag_has_best_fit(planted_grid):
    r2 = [r.mcfadden_r2 for r in planted_grid]
    assert int(np.argmax(r2)) + 1 == 2
    assert select_window(planted_grid).selected_lag == 2


def test_short_panel_rejected():
    with pytest.raises(SeriesTooShort):
        build_candidate_grid(synthetic.synthetic_panel(n=24))


def test_joint_lags_structure(bundled):
    grid = build_candidate_grid(bundled[0], lag_structure="joint-lags")
    assert len(grid) == 6
    assert grid[3].fit.column_names == ("const", "spread_l1", "spread_l2", "spread_l3", "spread_l4")


# selection -----------------------------------------------------------------

@pytest.mark.parametrize("country", sorted(PUBLISHED_GRIDS))
@pytest.mark.parametrize("criterion", CRITERIA)
def test_published_grids_select_starred_window(country, criterion):
    rows, starred, threshold = PUBLISHED_GRIDS[country]
    rep = select_window(rows, threshold, criterion, country)
    if country == "germany" and criterion == "mape":
        # the published MAPE is lower at 2 quarters (20.966 vs 20.982), so this
        # one criterion disagrees with the starred window
        assert rep.selected_lag == 2
        return
    assert rep.selected_lag == starred
    assert rep.significance_threshold == threshold


def test_uk_grid_needs_relaxation():
    rows, starred, _ = PUBLISHED_GRIDS["uk"]
    with pytest.raises(NoSignificantModel):
        select_window(rows, 0.01)
    rep = select_with_relaxation(rows, 0.01, 0.10)
    assert rep.relaxed and rep.selected_lag == starred and "relaxed" in rep.selection_rule


def test_single_significant_row_selected_for_any_criterion():
    rows = [row(1, 0.5, 0.1, 0.1, 1.0, 0.9), row(4, 0.001, 0.9, 0.9, 90.0, 0.01), row(5, 0.2, 0.2, 0.2, 2.0, 0.5)]
    for criterion in CRITERIA:
        assert select_window(rows, criterion=criterion).selected_lag == 4


def test_ties_go_to_shorter_window():
    rows = [row(5, 0.0, 0.4, 0.3, 10.0, 0.2), row(2, 0.0, 0.4, 0.3, 10.0, 0.2)]
    assert select_window(rows).selected_lag == 2


def test_failed_rows_are_not_candidates():
    rows = [GridRow(1, error="DegenerateDummy", message="x"), row(2, 0.0, 0.5, 0.4, 20.0, 0.1)]
    assert select_window(rows).selected_lag == 2


def test_bad_criterion():
    with pytest.raises(ValueError):
        select_window([row(1, 0.0, 0.5, 0.4, 20.0, 0.1)], criterion="aic")


grid_rows = st.lists(
    st.builds(
        row,
        st.just(0),
        st.floats(0, 1),
        st.floats(0, 1),
        st.floats(0, 1),
        st.floats(0, 100),
        st.floats(0, 0.99),
    ),
    min_size=1,
    max_size=6,
).map(lambda rs: [GridRow(i + 1, *(getattr(r, f) for f in ("p_value", "rmse", "mae", "mape", "mcfadden_r2")))
                  for i, r in enumerate(rs)])


@settings(max_examples=100, deadline=None)
@given(grid_rows, st.sampled_from(CRITERIA), st.randoms(use_true_random=False))
def test_selection_invariant_to_row_order(rows, criterion, rand):
    shuffled = rand.sample(rows, len(rows))
    try:
        a = select_window(rows, 0.5, criterion).selected_lag
    except NoSignificantModel:
        with pytest.raises(NoSignificantModel):
            select_window(shuffled, 0.5, criterion)
        return
    assert select_window(shuffled, 0.5, criterion).selected_lag == a


@settings(max_examples=100, deadline=None)
@given(grid_rows, st.floats(0.001, 0.5), st.floats(0, 0.5))
def test_relaxing_threshold_keeps_selected_candidate_feasible(rows, t, extra):
    try:
        rep = select_window(rows, t)
    except NoSignificantModel:
        return
    looser = t + extra
    feasible = {r.spread_lag for r in rows if r.p_value <= looser}
    assert rep.selected_lag in feasible
    assert select_window(rows, looser) is not None


# augmentation --------------------------------------------------------------

def test_augmented_nests_spread_only(bundled):
    for panel in bundled:
        for h in (1, 3, 6):
            aug = fit_augmented(panel, h)
            assert aug.fit.nobs == aug.baseline_fit.nobs
            assert aug.fit.log_likelihood >= aug.baseline_fit.log_likelihood - 1e-10
            assert aug.fit.column_names == ("const", f"spread_l{h}", "unemployment_l1", "log_stock_l1")
            assert aug.wald.df_num == 2


def test_planted_augmentation_improves_likelihood(planted):
    aug = fit_augmented(planted, 2)
    assert aug.fit.log_likelihood > aug.baseline_fit.log_likelihood
    assert aug.augmentation_significant


def test_augmented_result_unpacks(bundled):
    fit, evaluation, wald = fit_augmented(bundled[0], 3)
    assert len(fit.coefficients) == 4
    assert evaluation.n_observations == fit.nobs
    assert 0 <= wald.chi2_p <= 1


def test_insignificant_wald_is_flagged_but_kept(bundled):
    sweden = next(p for p in bundled if p.country == "sweden")
    sec = run_country(sweden, StudyConfig(wald_level=0.01))
    assert sec.augmented is not None and not sec.augmented.augmentation_significant
    assert any("not significant" in n for n in sec.notes)
    assert sec.path is not None


# probability path ----------------------------------------------------------

def test_probability_path_planted(planted):
    aug = fit_augmented(planted, 2)
    path = probability_path(aug.fit, planted, aug.spec)
    assert path.start == Quarter(1994, 3) and len(path) == 59
    assert np.all((path.values > 0) & (path.values < 1))
    np.testing.assert_allclose(path.values, aug.fit.fitted_probabilities, atol=1e-14)
    dummy = prepare(planted).dummy.as_series().restrict(path.start, path.end).values
    assert np.mean(path.values[dummy == 1] > 0.5) > 0.5


def test_intercept_only_path_is_constant(planted):
    prep = prepare(planted)
    spec = ModelSpec("planted", 2)
    design, _ = build_design(prep, spec)
    const = fit_probit(DesignMatrix(design.observations[:, :1], ("const",), design.response))
    fit = fit_probit(design)
    # substitute the intercept-only estimate into the spread model's layout
    from dataclasses import replace
    fixed = replace(fit, coefficients=np.array([const.coefficients[0], 0.0]))
    path = probability_path(fixed, prep, spec)
    np.testing.assert_allclose(path.values, std_normal_cdf(const.coefficients[0]), rtol=1e-15)


# full study ----------------------------------------------------------------

def test_study_on_bundled_panels(bundled):
    rep = run_full_study(bundled)
    assert [s.country for s in rep.completed] == ["france", "germany", "italy", "sweden", "uk"]
    assert not rep.failed
    assert sum(len(s.grid) for s in rep.completed) == 30
    for sec in rep.completed:
        assert sec.error is None
        assert sec.selection.selected.p_value <= sec.selection.significance_threshold
        assert set(sec.summary) == {"rate_long_1y", "rate_short_3m", "unemployment", "log_stock_index", "spread"}
    uk = rep.completed[-1]
    assert uk.selection.relaxed and uk.notes


def test_country_samples_are_independent(bundled):
    together = run_full_study(bundled)
    alone = run_full_study([bundled[2]])
    a, b = together.completed[2], alone.completed[0]
    assert a.country == b.country == "italy"
    np.testing.assert_array_equal(a.augmented.fit.coefficients, b.augmented.fit.coefficients)
    assert [r.p_value for r in a.grid] == [r.p_value for r in b.grid]


def test_disjoint_panel_is_isolated(bundled):
    p = bundled[1]
    late = QuarterlySeries(Quarter(2020, 1), p.unemployment.values)
    broken = CountryPanel("broken", p.nominal_gdp, p.deflator, p.rate_long, p.rate_short, late, p.stock_index)
    rep = run_full_study([bundled[0], broken, bundled[2]])
    assert [s.country for s in rep.completed] == ["france", "italy"]
    (fail,) = rep.failed
    assert fail.country == "broken" and fail.error == "EmptyIntersection"


def test_constant_series_summary():
    p = synthetic.synthetic_panel(seed=3)
    flat = QuarterlySeries(p.rate_long.start, np.full(len(p.rate_long), 4.07))
    panel = CountryPanel("flat", p.nominal_gdp, p.deflator, flat, p.rate_short, p.unemployment, p.stock_index)
    block = summary_block(prepare(panel))
    assert block["rate_long_1y"]["std_dev"] == 0.0
    assert not block["rate_long_1y"]["moments_defined"]
    assert math.isnan(block["rate_long_1y"]["skewness"])


def test_study_is_deterministic(bundled):
    a, b = run_full_study(bundled), run_full_study(synthetic.bundled_panels(synthetic.DEFAULT_SEED))
    for x, y in zip(a.completed, b.completed):
        np.testing.assert_array_equal(x.augmented.fit.coefficients, y.augmented.fit.coefficients)
        np.testing.assert_array_equal(x.path.values, y.path.values)
