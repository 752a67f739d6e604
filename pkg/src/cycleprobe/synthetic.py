"""Synthetic quarterly panels for tests, demos and the bundled data files.

Log real GDP is a linear trend plus a stationary AR(2) cycle. The yield
spread tracks the cycle a few quarters ahead; unemployment and the stock
index carry a weaker one-quarter lead. All draws come from
``numpy.random.default_rng`` and are reproducible from the seed, which
defaults to ``$CYCLEPROBE_SEED`` when set.
"""

from __future__ import annotations

import os

import numpy as np

from .hp import hp_cycle
from .timeseries import CountryPanel, Quarter, QuarterlySeries

DEFAULT_SEED = 20090101
SAMPLE_START = Quarter(1994, 1)
SAMPLE_LENGTH = 61  # 1994:Q1 .. 2009:Q1

# country label -> (spread lead in quarters, base log stock level, spread loading)
# the weak uk loading leaves no window significant at 1%
BUNDLED = {
    "france": (3, 8.2, 60.0),
    "germany": (3, 8.4, 60.0),
    "italy": (2, 9.9, 60.0),
    "sweden": (6, 6.5, 60.0),
    "uk": (3, 8.2, 7.0),
}


def default_seed() -> int:
    env = os.environ.get("CYCLEPROBE_SEED")
    return int(env) if env else DEFAULT_SEED


def _rng(seed):
    return np.random.default_rng(default_seed() if seed is None else seed)


def ar2_cycle(n: int, rng, phi=(1.3, -0.45), sigma=0.004, burn=100) -> np.ndarray:
    e = rng.normal(0.0, sigma, n + burn)
    c = np.zeros(n + burn)
    for t in range(2, n + burn):
        c[t] = phi[0] * c[t - 1] + phi[1] * c[t - 2] + e[t]
    return c[burn:]


def gdp_like(n: int = SAMPLE_LENGTH, seed=None, growth=0.006, level=12.0) -> np.ndarray:
    """Log-linear trend plus AR(1) cycle: the series shape used for HP robustness checks."""
    rng = _rng(seed)
    c = np.zeros(n)
    e = rng.normal(0.0, 0.006, n)
    for t in range(1, n):
        c[t] = 0.85 * c[t - 1] + e[t]
    return level + growth * np.arange(n) + c


def _deflator(n: int, start: Quarter, inflation=0.005) -> np.ndarray:
    # base year 2000 averages 100
    t = np.arange(n) - (Quarter(2000, 1) - start) - 1.5
    return 100.0 * np.exp(inflation * t)


def _panel_from_parts(country, start, log_real, spread, unemployment, log_stock, rng) -> CountryPanel:
    n = log_real.size
    deflator = _deflator(n, start)
    nominal = np.exp(log_real) * deflator / 100.0
    level = 4.0 + rng.normal(0.0, 0.5)
    short = np.cumsum(rng.normal(0.0, 0.25, n))
    short = np.clip(short - short.mean() + level, 0.5, None)
    long_ = short + spread
    s = lambda v: QuarterlySeries(start, v)
    return CountryPanel(
        country=country,
        nominal_gdp=s(nominal),
        deflator=s(deflator),
        rate_long=s(long_),
        rate_short=s(short),
        unemployment=s(unemployment),
        stock_index=s(np.exp(log_stock)),
    )


def synthetic_panel(
    country: str = "synthetic",
    seed=None,
    spread_lead: int = 3,
    n: int = SAMPLE_LENGTH,
    start: Quarter = SAMPLE_START,
    stock_level: float = 8.2,
    spread_loading: float = 60.0,
    spread_noise: float = 0.35,
) -> CountryPanel:
    """A panel whose spread moves with the output cycle ``spread_lead`` quarters later."""
    rng = _rng(seed)
    lead = max(spread_lead, 1)
    c = ar2_cycle(n + lead, rng)
    cyc, fut = c[:n], c
    log_real = 12.0 + 0.006 * np.arange(n) + cyc
    spr = 0.3 + spread_loading * fut[spread_lead : spread_lead + n] + rng.normal(0.0, spread_noise, n)
    unemp = 8.5 - 40.0 * fut[1 : 1 + n] + 0.4 * np.cumsum(rng.normal(0.0, 0.15, n))
    log_stock = stock_level + 0.01 * np.arange(n) + 6.0 * fut[1 : 1 + n] + np.cumsum(
        rng.normal(0.0, 0.05, n)
    )
    return _panel_from_parts(country, start, log_real, spr, unemp, log_stock, rng)


def bundled_panels(seed=None) -> list[CountryPanel]:
    """The five panels shipped in ``cycleprobe/data``."""
    base = default_seed() if seed is None else seed
    return [
        synthetic_panel(name, seed=base + i, spread_lead=lead, stock_level=level, spread_loading=load)
        for i, (name, (lead, level, load)) in enumerate(BUNDLED.items())
    ]


def planted_signal_panel(
    signal_lag: int = 2,
    seed=None,
    n: int = SAMPLE_LENGTH,
    noise: float = 0.6,
    country: str = "planted",
) -> CountryPanel:
    """Spread at ``t - signal_lag`` equals minus the HP cycle at ``t`` plus noise.

    The cycle is taken from the HP filter of the panel's own log real GDP at
    lambda 1600, so the spread carries the dummy's sign information at
    exactly ``signal_lag``. Unemployment one quarter back carries it too.
    The noise keeps the classes from being separable.
    """
    rng = _rng(seed)
    c = ar2_cycle(n, rng, phi=(0.9, -0.3), sigma=0.008)
    log_real = 12.0 + 0.006 * np.arange(n) + c
    hp = hp_cycle(log_real, 1600.0)
    z = hp / hp.std()
    spr = np.empty(n)
    spr[: n - signal_lag] = -z[signal_lag:]
    spr[n - signal_lag :] = 0.0
    spr += rng.normal(0.0, noise, n)
    unemp = np.empty(n)
    unemp[: n - 1] = 8.0 - 1.5 * z[1:]
    unemp[n - 1] = 8.0
    unemp += rng.normal(0.0, 0.8, n)
    log_stock = 8.2 + 0.01 * np.arange(n) + rng.normal(0.0, 0.1, n)
    return _panel_from_parts(country, SAMPLE_START, log_real, spr, unemp, log_stock, rng)


def noise_spread_panel(seed=None, n: int = SAMPLE_LENGTH, country: str = "noise") -> CountryPanel:
    """Spread drawn independently of everything else."""
    rng = _rng(seed)
    c = ar2_cycle(n, rng)
    log_real = 12.0 + 0.006 * np.arange(n) + c
    spr = 0.3 + rng.normal(0.0, 0.6, n)
    unemp = 8.5 + np.cumsum(rng.normal(0.0, 0.15, n))
    log_stock = 8.2 + 0.01 * np.arange(n) + np.cumsum(rng.normal(0.0, 0.05, n))
    return _panel_from_parts(country, SAMPLE_START, log_real, spr, unemp, log_stock, rng)


def write_bundled(directory) -> list:
    """Write the five bundled panels and a ``study.json`` config pointing at them."""
    import json
    from pathlib import Path

    from .io import write_panel_csv

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = [write_panel_csv(p, directory / f"{p.country}.csv") for p in bundled_panels()]
    config = {
        "panels": {p.stem: p.name for p in paths},
        "lambda": 1600,
        "lambda_sweep": [1000, 1600, 2200],
        "max_lag": 6,
        "significance_threshold": 0.01,
        "relaxed_threshold": 0.10,
        "selection_criterion": "rmse",
        "output_directory": "cycleprobe-out",
    }
    cfg = directory / "study.json"
    cfg.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    return paths + [cfg]


def bundled_data_dir():
    from importlib.resources import files

    return files("cycleprobe") / "data"


if __name__ == "__main__":
    import sys

    for p in write_bundled(sys.argv[1] if len(sys.argv) > 1 else "."):
        print(p)
