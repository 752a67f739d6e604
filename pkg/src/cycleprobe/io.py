"""Panel CSV format.

One file per country, UTF-8, header exactly::

    quarter,nominal_gdp,deflator,rate_long_1y,rate_short_3m,unemployment,stock_index

Quarter tokens are ``YYYY:Qn`` in ascending order with no gaps or repeats;
numbers use ``.`` as the decimal separator.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .errors import DuplicateQuarter, GapInSeries, NonPositiveValue, ParseError
from .timeseries import CountryPanel, Quarter, QuarterlySeries

PANEL_COLUMNS = (
    "quarter", "nominal_gdp", "deflator", "rate_long_1y",
    "rate_short_3m", "unemployment", "stock_index",
)
_FIELDS = {
    "nominal_gdp": "nominal_gdp",
    "deflator": "deflator",
    "rate_long_1y": "rate_long",
    "rate_short_3m": "rate_short",
    "unemployment": "unemployment",
    "stock_index": "stock_index",
}
_POSITIVE = ("nominal_gdp", "deflator", "stock_index")


def format_float(x: float) -> str:
    """Shortest text that reads back to the same double."""
    return repr(float(x))


def parse_panel_csv(path, country: str | None = None) -> CountryPanel:
    """Read and validate one country file; ``country`` defaults to the file stem."""
    path = Path(path)
    country = country or path.stem
    try:
        fh = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: line 1: empty file") from None
        except (csv.Error, UnicodeDecodeError) as exc:
            raise ParseError(f"{path}: line 1: {exc}") from exc
        header = [h.strip() for h in header]
        if tuple(header) != PANEL_COLUMNS:
            raise ParseError(
                f"{path}: line 1: header must be {','.join(PANEL_COLUMNS)}, got {','.join(header)}"
            )
        quarters: list[Quarter] = []
        columns = {name: [] for name in PANEL_COLUMNS[1:]}
        try:
            for row in reader:
                line = reader.line_num
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != len(PANEL_COLUMNS):
                    raise ParseError(
                        f"{path}: line {line}: expected {len(PANEL_COLUMNS)} fields, got {len(row)}"
                    )
                try:
                    q = Quarter.parse(row[0])
                except ValueError:
                    raise ParseError(
                        f"{path}: line {line}, column 1 (quarter): invalid quarter {row[0]!r}"
                    ) from None
                if quarters:
                    prev = quarters[-1]
                    if q in quarters:
                        raise DuplicateQuarter(f"{path}: line {line}: quarter {q} repeated")
                    if q < prev:
                        raise ParseError(f"{path}: line {line}: quarter {q} out of order after {prev}")
                    if q != prev + 1:
                        raise GapInSeries(f"{path}: line {line}: missing quarter {prev + 1}")
                quarters.append(q)
                for col, (name, cell) in enumerate(zip(PANEL_COLUMNS[1:], row[1:]), start=2):
                    try:
                        v = float(cell)
                    except ValueError:
                        v = math.nan
                    if not math.isfinite(v):
                        raise ParseError(
                            f"{path}: line {line}, column {col} ({name}): not a finite number: {cell!r}"
                        )
                    if name in _POSITIVE and v <= 0:
                        raise NonPositiveValue(
                            f"{path}: line {line}, column {col} ({name}): must be positive, got {v}"
                        )
                    columns[name].append(v)
        except (csv.Error, UnicodeDecodeError) as exc:
            raise ParseError(f"{path}: line {reader.line_num}: {exc}") from exc
    if not quarters:
        raise ParseError(f"{path}: no data rows")
    start = quarters[0]
    return CountryPanel(
        country=country,
        **{_FIELDS[name]: QuarterlySeries(start, np.array(vals)) for name, vals in columns.items()},
    )


def write_panel_csv(panel: CountryPanel, path) -> Path:
    """Write an aligned panel in the ingestion format (exact round trip)."""
    p = panel.aligned()
    series = [getattr(p, _FIELDS[name]) for name in PANEL_COLUMNS[1:]]
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PANEL_COLUMNS)
        for k, q in enumerate(p.nominal_gdp.quarters()):
            w.writerow([str(q)] + [format_float(s.values[k]) for s in series])
    return path
