"""Quarterly series container and the elementary transforms built on it."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import EmptyIntersection, LagTooLarge, MisalignedSeries, NonPositiveInput

_QUARTER_RE = re.compile(r"^(\d{4}):Q([1-4])$")


@dataclass(frozen=True, order=True)
class Quarter:
    """A calendar quarter, ordered chronologically.

    Integer arithmetic moves in whole quarters: ``Quarter(1999, 4) + 1`` is
    ``Quarter(2000, 1)`` and the difference of two quarters is the number of
    steps between them.
    """

    year: int
    quarter: int

    def __post_init__(self):
        if self.quarter not in (1, 2, 3, 4):
            raise ValueError(f"quarter must be 1..4, got {self.quarter}")

    @classmethod
    def parse(cls, token: str) -> "Quarter":
        m = _QUARTER_RE.match(token.strip())
        if m is None:
            raise ValueError(f"invalid quarter token {token!r}, expected YYYY:Qn")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def from_ordinal(cls, n: int) -> "Quarter":
        year, q = divmod(n, 4)
        return cls(year, q + 1)

    @property
    def ordinal(self) -> int:
        return 4 * self.year + self.quarter - 1

    def __add__(self, steps: int) -> "Quarter":
        if not isinstance(steps, (int, np.integer)):
            return NotImplemented
        return Quarter.from_ordinal(self.ordinal + int(steps))

    def __sub__(self, other):
        if isinstance(other, Quarter):
            return self.ordinal - other.ordinal
        if isinstance(other, (int, np.integer)):
            return Quarter.from_ordinal(self.ordinal - int(other))
        return NotImplemented

    def __str__(self) -> str:
        return f"{self.year}:Q{self.quarter}"


@dataclass(frozen=True)
class QuarterlySeries:
    """Contiguous quarterly observations: ``values[k]`` belongs to ``start + k``."""

    start: Quarter
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).reshape(-1)
        if vals.size == 0:
            raise ValueError("a quarterly series needs at least one observation")
        if not np.all(np.isfinite(vals)):
            raise ValueError("quarterly series values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size

    @property
    def end(self) -> Quarter:
        return self.start + (len(self) - 1)

    def quarters(self) -> list[Quarter]:
        return [self.start + k for k in range(len(self))]

    def __iter__(self) -> Iterator[tuple[Quarter, float]]:
        return zip(self.quarters(), self.values.tolist())

    def same_range(self, other: "QuarterlySeries") -> bool:
        return self.start == other.start and len(self) == len(other)

    def restrict(self, first: Quarter, last: Quarter) -> "QuarterlySeries":
        """Sub-series over ``[first, last]``, which must lie inside this series."""
        if first < self.start or last > self.end or last < first:
            raise EmptyIntersection(
                f"range {first}..{last} is not inside {self.start}..{self.end}"
            )
        i = first - self.start
        return QuarterlySeries(first, self.values[i : i + (last - first) + 1])

    def map(self, fn) -> "QuarterlySeries":
        return QuarterlySeries(self.start, fn(self.values))


@dataclass(frozen=True)
class CountryPanel:
    """One country's raw inputs.

    Series may cover different ranges; everything downstream works on
    :func:`common_range`. Overlap is checked lazily so that a panel with
    disjoint members can still be built and fail inside a study run.
    """

    country: str
    nominal_gdp: QuarterlySeries
    deflator: QuarterlySeries
    rate_long: QuarterlySeries
    rate_short: QuarterlySeries
    unemployment: QuarterlySeries
    stock_index: QuarterlySeries

    def __post_init__(self):
        if np.any(self.deflator.values <= 0):
            raise NonPositiveInput(f"{self.country}: deflator must be strictly positive")
        if np.any(self.stock_index.values <= 0):
            raise NonPositiveInput(f"{self.country}: stock index must be strictly positive")

    def series(self) -> dict[str, QuarterlySeries]:
        return {
            "nominal_gdp": self.nominal_gdp,
            "deflator": self.deflator,
            "rate_long": self.rate_long,
            "rate_short": self.rate_short,
            "unemployment": self.unemployment,
            "stock_index": self.stock_index,
        }

    def aligned(self) -> "CountryPanel":
        """Copy of the panel with every member cut to the common range."""
        first, last = common_range(self)
        return CountryPanel(
            self.country, **{k: s.restrict(first, last) for k, s in self.series().items()}
        )


def overlap(*series: QuarterlySeries) -> tuple[Quarter, Quarter]:
    """Largest quarter range covered by every given series."""
    if not series:
        raise ValueError("need at least one series")
    first = max(s.start for s in series)
    last = min(s.end for s in series)
    if last < first:
        raise EmptyIntersection(f"no common quarter (latest start {first}, earliest end {last})")
    return first, last


def common_range(panel: CountryPanel) -> tuple[Quarter, Quarter]:
    return overlap(*panel.series().values())


def align(*series: QuarterlySeries) -> list[QuarterlySeries]:
    first, last = overlap(*series)
    return [s.restrict(first, last) for s in series]


def _check_aligned(a: QuarterlySeries, b: QuarterlySeries, what: str):
    if not a.same_range(b):
        raise MisalignedSeries(
            f"{what}: ranges differ ({a.start}..{a.end} vs {b.start}..{b.end})"
        )


def real_log_gdp(nominal: QuarterlySeries, deflator: QuarterlySeries) -> QuarterlySeries:
    """Log real GDP, ``ln(100 * nominal / deflator)`` with the deflator based at 100."""
    _check_aligned(nominal, deflator, "real_log_gdp")
    if np.any(nominal.values <= 0) or np.any(deflator.values <= 0):
        raise NonPositiveInput("nominal GDP and deflator must be strictly positive")
    return QuarterlySeries(nominal.start, np.log(100.0 * nominal.values / deflator.values))


def spread(rate_long: QuarterlySeries, rate_short: QuarterlySeries) -> QuarterlySeries:
    """Long minus short rate, in percentage points."""
    _check_aligned(rate_long, rate_short, "spread")
    return QuarterlySeries(rate_long.start, rate_long.values - rate_short.values)


def lag(series: QuarterlySeries, k: int) -> QuarterlySeries:
    """Shift forward by ``k`` quarters so the value dated ``t`` is the input at ``t - k``.

    The result starts ``k`` quarters later and is ``k`` observations shorter.
    """
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"lag order must be a positive integer, got {k!r}")
    if k >= len(series):
        raise LagTooLarge(f"lag {k} leaves nothing of a length-{len(series)} series")
    return QuarterlySeries(series.start + int(k), series.values[: len(series) - k])


def log_series(series: QuarterlySeries) -> QuarterlySeries:
    if np.any(series.values <= 0):
        raise NonPositiveInput("log of a non-positive value")
    return series.map(np.log)


def from_values(start: Quarter | str, values: Sequence[float]) -> QuarterlySeries:
    """Convenience constructor accepting a ``"YYYY:Qn"`` token for ``start``."""
    if isinstance(start, str):
        start = Quarter.parse(start)
    return QuarterlySeries(start, np.asarray(values, dtype=float))
