"""Forecast accuracy of predicted probabilities against the realised dummy.

MAPE divides by the actual value, which is zero in every above-trend
quarter of a 0/1 target. Those quarters are left out of the MAPE average
(and counted), and the result is expressed in percent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllActualsZero, EmptyInput, LengthMismatch

MAPE_CONVENTION = "skip-zero-actual"


@dataclass(frozen=True)
class EvaluationReport:
    rmse: float
    mae: float
    mape: float
    n_observations: int
    n_skipped_zero_actual: int
    mape_convention: str = MAPE_CONVENTION

    @property
    def n_evaluated(self) -> int:
        """Observations entering the MAPE average."""
        return self.n_observations - self.n_skipped_zero_actual


def _errors(actual, forecast) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float).reshape(-1)
    f = np.asarray(forecast, dtype=float).reshape(-1)
    if a.size != f.size:
        raise LengthMismatch(f"{a.size} actual values vs {f.size} forecasts")
    if a.size == 0:
        raise EmptyInput("no observations to evaluate")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(f))):
        raise ValueError("actual and forecast values must be finite")
    return a, a - f


def rmse(actual, forecast) -> float:
    _, e = _errors(actual, forecast)
    return float(np.sqrt(np.mean(e * e)))


def mae(actual, forecast) -> float:
    _, e = _errors(actual, forecast)
    return float(np.mean(np.abs(e)))


def mape(actual, forecast) -> tuple[float, int]:
    """Mean absolute percentage error over non-zero actuals.

    Returns
    -------
    value : float
        ``100 * mean(|e_t / actual_t|)`` over ``actual_t != 0``.
    n_skipped : int
        Number of zero actuals left out.
    """
    a, e = _errors(actual, forecast)
    keep = a != 0
    if not keep.any():
        raise AllActualsZero("every actual value is zero; MAPE is undefined")
    return float(100.0 * np.mean(np.abs(e[keep] / a[keep]))), int(a.size - keep.sum())


def evaluate(actual, forecast) -> EvaluationReport:
    value, skipped = mape(actual, forecast)
    return EvaluationReport(
        rmse=rmse(actual, forecast),
        mae=mae(actual, forecast),
        mape=value,
        n_observations=int(np.size(actual)),
        n_skipped_zero_actual=skipped,
    )
