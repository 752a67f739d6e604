"""Hodrick-Prescott trend/cycle decomposition and the below-trend indicator.

The trend ``tau`` minimises ``sum (y - tau)**2 + lam * sum (D tau)**2`` with
``D`` the (T-2) x T second-difference operator, i.e. it solves
``(I + lam D'D) tau = y``. That system has condition number of order
``16 * lam``, which loses most of the digits for very stiff filters, so the
solve goes through the equivalent identity

    (I + lam D'D)^-1 = I - D' (I/lam + D D')^-1 D

and computes the cycle directly as ``D' z`` with ``(I/lam + D D') z = D y``.
``D D'`` is the constant pentadiagonal band (1, -4, 6, -4, 1), factorised
with LAPACK's O(T) banded Cholesky.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import linalg

from .errors import FactorizationError, NonPositiveLambda, SeriesTooShort
from .timeseries import Quarter, QuarterlySeries

DEFAULT_LAMBDA = 1600.0
PRESETS = {
    "quarterly": (1600.0,),
    "paper-sweep": (1000.0, 1600.0, 2200.0),
}


@dataclass(frozen=True)
class HpDecomposition:
    lam: float
    trend: QuarterlySeries
    cycle: QuarterlySeries

    @property
    def start(self) -> Quarter:
        return self.trend.start


@dataclass(frozen=True)
class RecessionDummy:
    start: Quarter
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int8).reshape(-1)
        if not np.all((vals == 0) | (vals == 1)):
            raise ValueError("dummy values must be 0 or 1")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size

    def as_series(self) -> QuarterlySeries:
        return QuarterlySeries(self.start, self.values.astype(float))


@dataclass(frozen=True)
class LambdaSweep:
    decompositions: list[HpDecomposition]
    agreement: np.ndarray  # fraction of quarters with matching cycle sign, pairwise

    @property
    def lambdas(self) -> list[float]:
        return [d.lam for d in self.decompositions]


def pentadiagonal_cholesky(diag, off1, off2):
    """Cholesky factor of a symmetric positive-definite pentadiagonal matrix.

    Parameters
    ----------
    diag : array, shape (n,)
        Main diagonal.
    off1 : array, shape (n-1,)
        First super-diagonal, ``A[i, i+1]``.
    off2 : array, shape (n-2,)
        Second super-diagonal, ``A[i, i+2]``.

    Returns
    -------
    l0, l1, l2 : arrays
        Bands of the lower factor: ``l0[i] = L[i, i]``, ``l1[i] = L[i+1, i]``,
        ``l2[i] = L[i+2, i]``.
    """
    n = len(diag)
    ab = np.zeros((3, n))
    ab[0] = diag
    ab[1, : n - 1] = off1
    ab[2, : max(n - 2, 0)] = off2
    try:
        low = linalg.cholesky_banded(ab, lower=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise FactorizationError(f"banded Cholesky failed: {exc}") from exc
    return low[0].copy(), low[1, : n - 1].copy(), low[2, : max(n - 2, 0)].copy()


def pentadiagonal_cho_solve(factor, rhs):
    """Solve ``L L' x = rhs`` given the bands from :func:`pentadiagonal_cholesky`."""
    l0, l1, l2 = factor
    n = len(l0)
    low = np.zeros((3, n))
    low[0] = l0
    low[1, : n - 1] = l1
    low[2, : max(n - 2, 0)] = l2
    return linalg.cho_solve_banded((low, True), np.asarray(rhs, dtype=float))


def second_difference(y: np.ndarray) -> np.ndarray:
    return y[2:] - 2.0 * y[1:-1] + y[:-2]


def second_difference_adjoint(z: np.ndarray) -> np.ndarray:
    """``D' z`` for ``z`` of length T-2."""
    out = np.zeros(z.size + 2)
    out[:-2] += z
    out[1:-1] -= 2.0 * z
    out[2:] += z
    return out


def hp_cycle(y, lam: float = DEFAULT_LAMBDA) -> np.ndarray:
    """Cyclical component of a plain array (the trend is ``y - cycle``)."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size < 4:
        raise SeriesTooShort(f"HP filter needs at least 4 observations, got {y.size}")
    if not (lam > 0) or not math.isfinite(lam):
        raise NonPositiveLambda(f"lambda must be positive and finite, got {lam!r}")
    if not np.all(np.isfinite(y)):
        raise FactorizationError("non-finite input to the HP filter")
    m = y.size - 2
    factor = pentadiagonal_cholesky(
        np.full(m, 6.0 + 1.0 / lam), np.full(m - 1, -4.0), np.full(max(m - 2, 0), 1.0)
    )
    z = pentadiagonal_cho_solve(factor, second_difference(y))
    return second_difference_adjoint(z)


def hp_decompose(series: QuarterlySeries, lam: float = DEFAULT_LAMBDA) -> HpDecomposition:
    """Split ``series`` into HP trend and cycle for smoothing parameter ``lam``."""
    cycle = hp_cycle(series.values, lam)
    trend = series.values - cycle
    return HpDecomposition(
        float(lam), QuarterlySeries(series.start, trend), QuarterlySeries(series.start, cycle)
    )


def sign_agreement(a: np.ndarray, b: np.ndarray) -> float:
    """Share of positions where ``a`` and ``b`` fall on the same side of zero.

    Uses the dummy's convention (strictly negative vs. not), so a pair of
    zeros counts as agreeing.
    """
    return float(np.mean((np.asarray(a) < 0) == (np.asarray(b) < 0)))


def lambda_sweep(series: QuarterlySeries, lambdas: Sequence[float] | str = "paper-sweep") -> LambdaSweep:
    """Decompose ``series`` once per smoothing parameter and compare cycle signs."""
    if isinstance(lambdas, str):
        lambdas = PRESETS[lambdas]
    decs = [hp_decompose(series, lam) for lam in lambdas]
    n = len(decs)
    agree = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            agree[i, j] = agree[j, i] = sign_agreement(decs[i].cycle.values, decs[j].cycle.values)
    return LambdaSweep(decs, agree)


def below_trend_dummy(decomposition: HpDecomposition) -> RecessionDummy:
    """1 where the cycle is strictly negative, 0 elsewhere (zero counts as 0)."""
    cyc = decomposition.cycle
    return RecessionDummy(cyc.start, (cyc.values < 0).astype(np.int8))
