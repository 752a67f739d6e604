"""Descriptive statistics in the layout of a macro data summary table."""

from __future__ import annotations

import numpy as np

STAT_ORDER = (
    "mean", "median", "maximum", "minimum", "std_dev",
    "skewness", "kurtosis", "jarque_bera", "observations",
)


def describe(values) -> dict:
    """Mean, median, extremes, sample std dev, moment shape and Jarque-Bera.

    Skewness and kurtosis are the plain (biased) moment ratios, kurtosis
    not in excess form, so a normal sample gives about 0 and 3. For a
    constant series both are undefined: they come back as NaN and
    ``moments_defined`` is False.
    """
    x = np.asarray(values, dtype=float).reshape(-1)
    n = x.size
    if n == 0:
        raise ValueError("cannot summarise an empty series")
    d = x - x.mean()
    m2 = np.mean(d**2)
    defined = bool(np.ptp(x) > 0 and m2 > 0)
    if defined:
        skew = float(np.mean(d**3) / m2**1.5)
        kurt = float(np.mean(d**4) / m2**2)
        jb = jarque_bera(n, skew, kurt)
    else:
        skew = kurt = jb = float("nan")
    return {
        "mean": float(x.mean()),
        "median": float(np.median(x)),
        "maximum": float(x.max()),
        "minimum": float(x.min()),
        "std_dev": float(x.std(ddof=1)) if n > 1 and defined else 0.0,
        "skewness": skew,
        "kurtosis": kurt,
        "jarque_bera": float(jb),
        "observations": n,
        "moments_defined": defined,
    }


def jarque_bera(n: int, skewness: float, kurtosis: float) -> float:
    return n / 6.0 * (skewness**2 + (kurtosis - 3.0) ** 2 / 4.0)
