"""Probit maximum likelihood with analytic derivatives, and Wald tests.

Tail-safe evaluation relies on the scaled complementary error function
``erfcx(z) = exp(z**2) erfc(z)``: for ``x < 0``

    Phi(x) = erfcx(-x / sqrt 2) * exp(-x**2 / 2) / 2

so ``log Phi`` and the Mills ratio ``phi / Phi`` never pass through an
underflowing probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special, stats

from .errors import (
    DegenerateDummy,
    DimensionMismatch,
    InvalidDesign,
    NotConverged,
    PerfectSeparation,
    SingularInformation,
    SingularSubcovariance,
)

_SQRT2 = math.sqrt(2.0)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

GRADIENT_TOL = 1e-8
LOGLIK_RTOL = 1e-12
MAX_ITER = 100
DIVERGENCE_BOUND = 1e4
CONDITION_LIMIT = 1e12


def std_normal_cdf(x):
    """Standard normal CDF through ``erfc``; exact symmetry ``Phi(-x) = 1 - Phi(x)``."""
    return 0.5 * special.erfc(-np.asarray(x, dtype=float) / _SQRT2)[()]


def std_normal_pdf(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x - _LOG_SQRT_2PI)[()]


def log_cdf(x):
    """``log Phi(x)``, finite for every finite ``x``."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    neg = x < 0
    xn = x[neg]
    out[neg] = np.log(0.5 * special.erfcx(-xn / _SQRT2)) - 0.5 * xn * xn
    out[~neg] = np.log1p(-0.5 * special.erfc(x[~neg] / _SQRT2))
    return out[()]


def log_cdf_pair(x):
    """``(log Phi(x), log(1 - Phi(x)))`` without cancellation in either tail."""
    x = np.asarray(x, dtype=float)
    return log_cdf(x), log_cdf(-x)


def mills_ratio(x):
    """``phi(x) / Phi(x)``; tends to ``-x`` as ``x -> -inf`` and to 0 as ``x -> inf``."""
    x = np.asarray(x, dtype=float)
    # erfcx(-x/sqrt2) overflows only when the ratio is far below double precision
    with np.errstate(over="ignore"):
        return (_SQRT_2_OVER_PI / special.erfcx(-x / _SQRT2))[()]


@dataclass(frozen=True)
class DesignMatrix:
    """Regressors (intercept in column 0) and a binary response."""

    observations: np.ndarray
    column_names: tuple[str, ...]
    response: np.ndarray

    def __post_init__(self):
        X = np.array(self.observations, dtype=float)
        y = np.array(self.response, dtype=float).reshape(-1)
        if X.ndim != 2:
            raise InvalidDesign("observations must be a 2-D array")
        n, k = X.shape
        names = tuple(self.column_names)
        if len(names) != k:
            raise InvalidDesign(f"{len(names)} column names for {k} columns")
        if y.size != n:
            raise InvalidDesign(f"response has {y.size} values for {n} rows")
        if n <= k:
            raise InvalidDesign(f"need more observations than columns (n={n}, k={k})")
        if not np.all(np.isfinite(X)):
            raise InvalidDesign("non-finite regressor value")
        if not np.all(X[:, 0] == 1.0):
            raise InvalidDesign("column 0 must be the intercept of ones")
        if not np.all((y == 0) | (y == 1)):
            raise InvalidDesign("response must be 0/1")
        if y.min() == y.max():
            raise DegenerateDummy(f"response is all {int(y[0])}; both classes are required")
        for j in range(1, k):
            if np.ptp(X[:, j]) == 0:
                raise InvalidDesign(f"column {names[j]!r} is constant")
            for i in range(j):
                if np.array_equal(X[:, i], X[:, j]):
                    raise InvalidDesign(f"columns {names[i]!r} and {names[j]!r} are identical")
        for a in (X, y):
            a.flags.writeable = False
        object.__setattr__(self, "observations", X)
        object.__setattr__(self, "response", y)
        object.__setattr__(self, "column_names", names)

    @classmethod
    def with_intercept(cls, regressors: dict[str, Sequence[float]], response) -> "DesignMatrix":
        y = np.asarray(response, dtype=float)
        cols = [np.ones(y.size)] + [np.asarray(v, dtype=float) for v in regressors.values()]
        return cls(np.column_stack(cols), ("const", *regressors), y)

    @property
    def nobs(self) -> int:
        return self.observations.shape[0]

    @property
    def k(self) -> int:
        return self.observations.shape[1]


@dataclass(frozen=True)
class ProbitFit:
    column_names: tuple[str, ...]
    coefficients: np.ndarray
    covariance: np.ndarray
    log_likelihood: float
    null_log_likelihood: float
    mcfadden_r2: float
    z_stats: np.ndarray
    p_values: np.ndarray
    fitted_probabilities: np.ndarray
    iterations: int
    converged: bool
    nobs: int
    loglik_path: tuple[float, ...] = field(default=(), repr=False)

    @property
    def k(self) -> int:
        return self.coefficients.size

    @property
    def std_errors(self) -> np.ndarray:
        return np.sqrt(np.diag(self.covariance))

    def index_of(self, name: str) -> int:
        return self.column_names.index(name)


@dataclass(frozen=True)
class WaldResult:
    restricted: tuple[str, ...]
    chi2_stat: float
    chi2_p: float
    f_stat: float
    f_p: float
    df_num: int
    df_denom: int


def loglike(beta, X, y) -> float:
    q = X @ beta
    return float(np.sum(np.where(y == 1, log_cdf(q), log_cdf(-q))))


def score(beta, X, y) -> np.ndarray:
    """Gradient: ``sum_t g_t x_t`` with ``g_t`` the generalised residual."""
    q = X @ beta
    g = np.where(y == 1, mills_ratio(q), -mills_ratio(-q))
    return X.T @ g


def hessian(beta, X, y) -> np.ndarray:
    q = X @ beta
    s = 2.0 * y - 1.0
    r = mills_ratio(s * q)
    w = r * (r + s * q)
    return -(X * w[:, None]).T @ X


def null_loglike(y) -> float:
    y = np.asarray(y, dtype=float)
    n1 = float(y.sum())
    n0 = y.size - n1
    p = n1 / y.size
    return n1 * math.log(p) + n0 * math.log1p(-p)


def fit_probit(design: DesignMatrix, max_iter: int = MAX_ITER) -> ProbitFit:
    """Maximum likelihood probit by damped Newton-Raphson.

    Starts at zero, takes full Newton steps on the observed information and
    halves the step until the log likelihood does not decrease. Stops when
    the gradient max-norm drops below ``1e-8`` or the relative change in the
    log likelihood below ``1e-12``.

    Raises
    ------
    PerfectSeparation
        Coefficient norm passes ``1e4`` while the likelihood keeps rising.
    SingularInformation
        The information matrix at the current point has condition number
        above ``1e12``.
    NotConverged
        ``max_iter`` iterations without meeting either stopping rule.
    """
    X, y = design.observations, design.response
    beta = np.zeros(design.k)
    ll = loglike(beta, X, y)
    path = [ll]
    converged = False
    it = 0
    while True:
        grad = score(beta, X, y)
        if np.max(np.abs(grad)) < GRADIENT_TOL:
            converged = True
            break
        if it >= max_iter:
            break
        info = -hessian(beta, X, y)
        if not np.all(np.isfinite(info)) or np.linalg.cond(info) > CONDITION_LIMIT:
            if np.linalg.norm(beta) > 0.5 * DIVERGENCE_BOUND:
                raise PerfectSeparation("information collapsed while coefficients diverge")
            raise SingularInformation(
                f"information matrix numerically singular at iteration {it}"
            )
        step = np.linalg.solve(info, grad)
        t = 1.0
        while True:
            cand = beta + t * step
            ll_new = loglike(cand, X, y)
            if ll_new >= ll:
                break
            t *= 0.5
            if t < 1e-12:
                cand, ll_new = beta, ll
                break
        it += 1
        change = ll_new - ll
        beta, ll = cand, ll_new
        path.append(ll)
        if np.linalg.norm(beta) > DIVERGENCE_BOUND:
            raise PerfectSeparation(
                f"coefficient norm {np.linalg.norm(beta):.3g} exceeded {DIVERGENCE_BOUND:g}; "
                "a hyperplane separates the classes"
            )
        if abs(change) <= LOGLIK_RTOL * abs(ll):
            converged = True
            break
    if not converged:
        raise NotConverged(f"no convergence after {max_iter} Newton iterations")
    if ll > -1e-6 * design.nobs:
        raise PerfectSeparation("fitted probabilities collapsed onto the observed classes")

    info = -hessian(beta, X, y)
    if np.linalg.cond(info) > CONDITION_LIMIT:
        raise SingularInformation("information matrix numerically singular at the optimum")
    cov = np.linalg.inv(info)
    cov = 0.5 * (cov + cov.T)
    se = np.sqrt(np.diag(cov))
    z = beta / se
    p = 2.0 * std_normal_cdf(-np.abs(z))
    ll0 = null_loglike(y)
    # the intercept-only model is the null model
    r2 = 0.0 if design.k == 1 else max(0.0, 1.0 - ll / ll0)
    fitted = interior_prob(X @ beta)
    return ProbitFit(
        column_names=design.column_names,
        coefficients=beta,
        covariance=cov,
        log_likelihood=ll,
        null_log_likelihood=ll0,
        mcfadden_r2=r2,
        z_stats=z,
        p_values=p,
        fitted_probabilities=fitted,
        iterations=it,
        converged=converged,
        nobs=design.nobs,
        loglik_path=tuple(path),
    )


_P_LOW = np.nextafter(0.0, 1.0)
_P_HIGH = np.nextafter(1.0, 0.0)


def interior_prob(index):
    """``Phi(index)`` kept strictly inside (0, 1).

    Beyond about 8.3 standard deviations ``Phi`` rounds to 1.0 in double
    precision; such values are replaced by the largest double below 1, an
    error of at most one ulp (and symmetrically near 0).
    """
    return np.clip(std_normal_cdf(index), _P_LOW, _P_HIGH)[()]


def predict_prob(fit: ProbitFit, regressors) -> float | np.ndarray:
    """``Phi(x' beta)`` for one regressor vector (intercept included) or a matrix of rows.

    Probabilities are kept strictly inside (0, 1), see :func:`interior_prob`.
    """
    x = np.asarray(regressors, dtype=float)
    if x.shape[-1] != fit.k:
        raise DimensionMismatch(f"expected {fit.k} regressors, got {x.shape[-1]}")
    if not np.all(np.isfinite(x)):
        raise DimensionMismatch("regressors must be finite")
    return interior_prob(x @ fit.coefficients)


def wald_test(fit: ProbitFit, restricted: Sequence[int | str]) -> WaldResult:
    """Joint test that the listed coefficients are all zero.

    Reports the chi-square form ``W = b' V^-1 b`` with ``q`` degrees of
    freedom and the F form ``W / q`` referred to ``F(q, n - k)``.
    """
    idx = []
    for r in restricted:
        i = fit.index_of(r) if isinstance(r, str) else int(r)
        if not 0 <= i < fit.k:
            raise IndexError(f"coefficient index {r!r} out of range")
        idx.append(i)
    if not idx:
        raise ValueError("at least one restriction is required")
    if len(set(idx)) != len(idx):
        raise ValueError("duplicate restriction")
    b = fit.coefficients[idx]
    V = fit.covariance[np.ix_(idx, idx)]
    if np.linalg.cond(V) > CONDITION_LIMIT:
        raise SingularSubcovariance("restricted covariance block is singular")
    W = float(b @ np.linalg.solve(V, b))
    q = len(idx)
    dfd = fit.nobs - fit.k
    return WaldResult(
        restricted=tuple(fit.column_names[i] for i in idx),
        chi2_stat=W,
        chi2_p=float(stats.chi2.sf(W, q)),
        f_stat=W / q,
        f_p=float(stats.f.sf(W / q, q, dfd)),
        df_num=q,
        df_denom=dfd,
    )
