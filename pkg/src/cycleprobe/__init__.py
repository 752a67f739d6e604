"""Below-trend output probabilities from the yield spread.

HP-filter the log real GDP, turn negative cycles into a 0/1 indicator,
and fit probit models on the lagged term spread (optionally with
unemployment and the stock index), choosing the forecast window by
in-sample accuracy.
"""

__version__ = "0.1.0"

from .errors import CycleProbeError
from .timeseries import (
    CountryPanel, Quarter, QuarterlySeries, common_range, lag, log_series, real_log_gdp, spread,
)
from .hp import below_trend_dummy, hp_decompose, lambda_sweep
from .probit import DesignMatrix, fit_probit, predict_prob, wald_test
from .metrics import evaluate, mae, mape, rmse
from .config import StudyConfig
from .pipeline import (
    build_candidate_grid, fit_augmented, probability_path, run_full_study, select_window,
)
from .io import parse_panel_csv

__all__ = [
    "CycleProbeError", "CountryPanel", "Quarter", "QuarterlySeries", "common_range", "lag",
    "log_series", "real_log_gdp", "spread", "below_trend_dummy", "hp_decompose", "lambda_sweep",
    "DesignMatrix", "fit_probit", "predict_prob", "wald_test", "evaluate", "mae", "mape", "rmse",
    "StudyConfig", "build_candidate_grid", "fit_augmented", "probability_path", "run_full_study",
    "select_window", "parse_panel_csv",
]
