"""``cycleprobe`` command line.

    cycleprobe <decompose|grid|study|summary> --config study.json
               [--lambda X] [--max-lag N] [--threshold P]
               [--criterion rmse|mae|mape|mcfadden] [--out DIR]

On failure the last stderr line is ``error: <ErrorClass>: <message>`` and
the exit status is the error class's code (see :mod:`cycleprobe.errors`).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import errors
from .config import CRITERIA, StudyConfig
from .errors import ConfigError, CycleProbeError, NoSignificantModel
from .hp import lambda_sweep
from .io import parse_panel_csv
from .pipeline import (
    CountryFailure, StudyReport, build_candidate_grid, prepare, run_country,
    select_with_relaxation, summary_block,
)
from .report import (
    preamble, write_decomposition, write_grid_outputs, write_study, write_summary_outputs, write_sweep,
)

log = logging.getLogger("cycleprobe")


class _GridSection:
    """Just enough of a country section for the grid table writer."""

    def __init__(self, country, grid, selection=None, error=None, message=""):
        self.country, self.grid, self.selection = country, grid, selection
        self.error, self.message = error, message


def _error_class(name: str) -> type[CycleProbeError]:
    cls = getattr(errors, name, None)
    return cls if isinstance(cls, type) and issubclass(cls, CycleProbeError) else CycleProbeError


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cycleprobe", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("decompose", "HP trend/cycle per country and lambda-sweep sign agreement"),
        ("grid", "spread-only probit for every forecast window, with window selection"),
        ("study", "full study: summary, grid, Wald test, augmented model, probability paths"),
        ("summary", "descriptive statistics of the explanatory variables"),
    ]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", required=True, type=Path)
        sp.add_argument("--lambda", dest="lam", type=float)
        sp.add_argument("--max-lag", dest="max_lag", type=int)
        sp.add_argument("--threshold", dest="significance_threshold", type=float)
        sp.add_argument("--criterion", dest="selection_criterion", choices=CRITERIA)
        sp.add_argument("--out", dest="output_directory", type=Path)
        sp.add_argument("-v", "--verbose", action="store_true")
    return p


def _load_panels(cfg: StudyConfig):
    if not cfg.panels:
        raise ConfigError("config lists no panels")
    return [parse_panel_csv(path, country) for country, path in cfg.panels.items()]


def cmd_decompose(cfg: StudyConfig) -> int:
    out = cfg.output_directory
    print(preamble(f"{cfg.significance_threshold:g}"), end="")
    for panel in _load_panels(cfg):
        prep = prepare(panel, cfg.lam)
        d = out / prep.country
        write_decomposition(d / "decomposition.csv", prep.log_gdp, prep.decomposition, prep.dummy)
        sweep = lambda_sweep(prep.log_gdp, cfg.lambda_sweep)
        write_sweep(d, sweep)
        labels = [f"{l:g}" for l in sweep.lambdas]
        pairs = [
            f"{labels[i]}/{labels[j]}={sweep.agreement[i, j]:.4f}"
            for i in range(len(labels)) for j in range(i + 1, len(labels))
        ]
        print(f"{prep.country}: lambda {cfg.lam:g}, {len(prep.log_gdp)} quarters, "
              f"{int(prep.dummy.values.sum())} below trend; sign agreement {' '.join(pairs) or '-'}")
    return 0


def cmd_grid(cfg: StudyConfig) -> int:
    sections = []
    fatal = None
    for panel in _load_panels(cfg):
        grid = build_candidate_grid(panel, cfg.lam, cfg.max_lag, cfg.lag_structure)
        bad = [r for r in grid if not r.ok]
        for r in bad:
            print(f"{panel.country}: window {r.spread_lag}: {r.error}: {r.message}", file=sys.stderr)
        if len(bad) == len(grid):
            sections.append(_GridSection(panel.country, grid, None, bad[0].error, bad[0].message))
            fatal = fatal or bad[0]
            continue
        try:
            sel = select_with_relaxation(
                grid, cfg.significance_threshold, cfg.relaxed_threshold,
                cfg.selection_criterion, panel.country,
            )
            sections.append(_GridSection(panel.country, grid, sel))
        except NoSignificantModel as exc:
            sections.append(_GridSection(panel.country, grid, None, type(exc).__name__, str(exc)))
    cfg.output_directory.mkdir(parents=True, exist_ok=True)
    print(write_grid_outputs(cfg.output_directory, sections,
                             f"{cfg.significance_threshold:g}", cfg.relaxed_threshold), end="")
    if fatal is not None:
        raise _error_class(fatal.error)(f"no window could be fitted: {fatal.message}")
    return 0


def cmd_study(cfg: StudyConfig) -> int:
    if not cfg.panels:
        raise ConfigError("config lists no panels")
    sections = []
    for country, path in cfg.panels.items():
        try:
            panel = parse_panel_csv(path, country)
            sections.append(run_country(panel, cfg))
        except CycleProbeError as exc:
            sections.append(CountryFailure(country, type(exc).__name__, str(exc)))
    report = StudyReport(cfg, sections)
    print(write_study(report, cfg.output_directory), end="")
    if not report.completed:
        first = report.failed[0]
        raise _error_class(first.error)(f"every country failed; first: {first.message}")
    return 0


def cmd_summary(cfg: StudyConfig) -> int:
    print(preamble(f"{cfg.significance_threshold:g}"), end="")
    items = [(p.country, summary_block(prepare(p, cfg.lam))) for p in _load_panels(cfg)]
    cfg.output_directory.mkdir(parents=True, exist_ok=True)
    print(write_summary_outputs(cfg.output_directory, items), end="")
    return 0


COMMANDS = {"decompose": cmd_decompose, "grid": cmd_grid, "study": cmd_study, "summary": cmd_summary}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = StudyConfig.from_file(args.config)
        relaxed = None
        if args.significance_threshold is not None:
            relaxed = max(cfg.relaxed_threshold, args.significance_threshold)
        cfg = cfg.override(
            lam=args.lam,
            max_lag=args.max_lag,
            significance_threshold=args.significance_threshold,
            relaxed_threshold=relaxed,
            selection_criterion=args.selection_criterion,
            output_directory=args.output_directory,
        )
        return COMMANDS[args.command](cfg)
    except CycleProbeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
