import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cycleprobe.errors import EmptyIntersection, LagTooLarge, MisalignedSeries, NonPositiveInput
from cycleprobe.synthetic import synthetic_panel
from cycleprobe.timeseries import (
    CountryPanel, Quarter, QuarterlySeries, align, common_range, from_values, lag, log_series,
    overlap, real_log_gdp, spread,
)


def span(first, last, value=1.0):
    a, b = Quarter.parse(first), Quarter.parse(last)
    return QuarterlySeries(a, np.full(b - a + 1, value))


def test_quarter_order_and_successor():
    assert Quarter(1999, 4) + 1 == Quarter(2000, 1)
    assert Quarter(2000, 1) - Quarter(1999, 4) == 1
    assert Quarter(1994, 1) < Quarter(1994, 2) < Quarter(1995, 1)
    assert str(Quarter.parse("2009:Q1")) == "2009:Q1"
    assert Quarter(2009, 1) - Quarter(1994, 1) == 60


@pytest.mark.parametrize("token", ["1994:Q5", "1994:Q0", "94:Q1", "1994Q1", "1994:q1"])
def test_quarter_parse_rejects(token):
    with pytest.raises(ValueError):
        Quarter.parse(token)


def test_series_is_immutable():
    s = from_values("2000:Q1", [1, 2, 3])
    with pytest.raises(ValueError):
        s.values[0] = 5.0
    with pytest.raises(ValueError):
        from_values("2000:Q1", [1.0, math.nan])
    assert s.end == Quarter(2000, 3)


def test_common_range_examples():
    a = span("1994:Q1", "2009:Q1")
    assert overlap(a, span("1994:Q1", "2009:Q1")) == (Quarter(1994, 1), Quarter(2009, 1))
    assert overlap(span("1991:Q1", "2009:Q1"), a) == (Quarter(1994, 1), Quarter(2009, 1))
    with pytest.raises(EmptyIntersection):
        overlap(span("1991:Q1", "1993:Q4"), a)


def test_common_range_of_panel():
    p = synthetic_panel(seed=1)
    longer = QuarterlySeries(Quarter(1991, 1), np.r_[np.ones(12), p.unemployment.values])
    p2 = CountryPanel(p.country, p.nominal_gdp, p.deflator, p.rate_long, p.rate_short, longer, p.stock_index)
    assert common_range(p2) == (Quarter(1994, 1), Quarter(2009, 1))
    assert len(p2.aligned().unemployment) == 61


def test_real_log_gdp_examples():
    s = lambda v: from_values("2000:Q1", [v])
    assert real_log_gdp(s(100), s(100)).values[0] == pytest.approx(4.60517, abs=1e-5)
    assert real_log_gdp(s(220), s(110)).values[0] == pytest.approx(5.29832, abs=1e-5)
    with pytest.raises(NonPositiveInput):
        real_log_gdp(s(100), s(0))
    with pytest.raises(MisalignedSeries):
        real_log_gdp(from_values("2000:Q1", [1, 2]), from_values("2000:Q2", [1, 2]))


def test_spread_examples():
    s = lambda v: from_values("2000:Q1", [v])
    # 1-year vs 3-month EMU means
    assert spread(s(4.07), s(3.99)).values[0] == pytest.approx(0.08, abs=1e-12)
    flat = from_values("2000:Q1", [3.0, 4.0, 5.0])
    assert np.all(spread(flat, flat).values == 0)
    assert spread(s(2.14), s(7.14)).values[0] == pytest.approx(-5.0, abs=1e-12)
    with pytest.raises(MisalignedSeries):
        spread(flat, from_values("2000:Q1", [1.0]))


def test_lag_examples():
    out = lag(from_values("2000:Q1", [1, 2, 3, 4]), 1)
    assert out.start == Quarter(2000, 2)
    np.testing.assert_array_equal(out.values, [1, 2, 3])
    with pytest.raises(ValueError):
        lag(out, 0)
    with pytest.raises(LagTooLarge):
        lag(from_values("2000:Q1", [1, 2, 3]), 3)


def test_log_series_examples():
    # France mean log stock index
    assert log_series(from_values("2000:Q1", [math.exp(8.20)])).values[0] == pytest.approx(8.20)
    assert log_series(from_values("2000:Q1", [1.0])).values[0] == 0.0
    with pytest.raises(NonPositiveInput):
        log_series(from_values("2000:Q1", [-5.0]))


finite = st.floats(-1e6, 1e6, allow_nan=False)
quarters = st.builds(Quarter, st.integers(1950, 2050), st.integers(1, 4))


@st.composite
def series(draw, min_size=1, max_size=40):
    vals = draw(st.lists(finite, min_size=min_size, max_size=max_size))
    return QuarterlySeries(draw(quarters), np.array(vals))


@given(series(min_size=3), st.integers(1, 20), st.integers(1, 20))
def test_lag_composes(s, a, b):
    if a + b >= len(s):
        return
    twice, once = lag(lag(s, a), b), lag(s, a + b)
    assert twice.start == once.start
    np.testing.assert_array_equal(twice.values, once.values)


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=30), quarters)
def test_spread_antisymmetric(pairs, q):
    x = QuarterlySeries(q, np.array([p[0] for p in pairs]))
    y = QuarterlySeries(q, np.array([p[1] for p in pairs]))
    np.testing.assert_array_equal(spread(x, y).values + spread(y, x).values, 0.0)


@given(
    st.lists(st.tuples(st.floats(1e-3, 1e6), st.floats(1e-3, 1e3)), min_size=1, max_size=20),
    st.floats(1e-3, 1e3),
)
def test_real_log_gdp_scale_invariant(pairs, c):
    q = Quarter(2000, 1)
    nom = np.array([p[0] for p in pairs])
    dfl = np.array([p[1] for p in pairs])
    a = real_log_gdp(QuarterlySeries(q, nom), QuarterlySeries(q, dfl)).values
    b = real_log_gdp(QuarterlySeries(q, c * nom), QuarterlySeries(q, c * dfl)).values
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


@given(series(max_size=10), series(max_size=10), series(max_size=10))
def test_overlap_commutative_associative(a, b, c):
    def safe(*s):
        try:
            return overlap(*s)
        except EmptyIntersection:
            return None

    assert safe(a, b) == safe(b, a)
    ab = safe(a, b)
    left = None if ab is None else safe(*align(a, b), c)
    bc = safe(b, c)
    right = None if bc is None else safe(a, *align(b, c))
    assert left == right == safe(a, b, c)
