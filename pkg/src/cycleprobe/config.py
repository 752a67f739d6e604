"""Study configuration: one JSON file plus keyword overrides."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError, NonPositiveLambda
from .metrics import MAPE_CONVENTION

CRITERIA = ("rmse", "mae", "mape", "mcfadden")
LAG_STRUCTURES = ("single", "joint-lags")
MAX_WINDOW = 6


@dataclass(frozen=True)
class StudyConfig:
    panels: dict[str, Path] = field(default_factory=dict)
    lam: float = 1600.0
    lambda_sweep: tuple[float, ...] = (1000.0, 1600.0, 2200.0)
    max_lag: int = 6
    significance_threshold: float = 0.01
    relaxed_threshold: float = 0.10
    selection_criterion: str = "rmse"
    lag_structure: str = "single"
    wald_level: float = 0.05
    output_directory: Path = Path("cycleprobe-out")
    mape_convention: str = MAPE_CONVENTION

    def __post_init__(self):
        if not (self.lam > 0) or not math.isfinite(self.lam):
            raise NonPositiveLambda(f"lambda must be positive, got {self.lam!r}")
        for lam in self.lambda_sweep:
            if not (lam > 0) or not math.isfinite(lam):
                raise NonPositiveLambda(f"sweep lambda must be positive, got {lam!r}")
        if not 0 < self.significance_threshold <= self.relaxed_threshold < 1:
            raise ConfigError(
                "need 0 < significance_threshold <= relaxed_threshold < 1, got "
                f"{self.significance_threshold} / {self.relaxed_threshold}"
            )
        if not 1 <= self.max_lag <= MAX_WINDOW:
            raise ConfigError(f"max_lag must be in 1..{MAX_WINDOW}, got {self.max_lag}")
        if self.selection_criterion not in CRITERIA:
            raise ConfigError(f"criterion must be one of {CRITERIA}")
        if self.lag_structure not in LAG_STRUCTURES:
            raise ConfigError(f"lag_structure must be one of {LAG_STRUCTURES}")
        if not 0 < self.wald_level < 1:
            raise ConfigError("wald_level must lie in (0, 1)")
        if self.mape_convention != MAPE_CONVENTION:
            raise ConfigError(f"only the {MAPE_CONVENTION!r} MAPE convention is supported")

    @classmethod
    def from_file(cls, path, **overrides) -> "StudyConfig":
        """Read a JSON config; relative panel paths resolve against its directory.

        ``None`` overrides are ignored so argparse defaults pass straight through.
        """
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        base = path.parent
        kw = {}
        known = {f for f in cls.__dataclass_fields__}
        aliases = {"lambda": "lam"}
        for key, value in raw.items():
            key = aliases.get(key, key)
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            kw[key] = value
        if "panels" in kw:
            if not isinstance(kw["panels"], dict):
                raise ConfigError("'panels' must map country names to CSV paths")
            kw["panels"] = {c: (base / p) for c, p in kw["panels"].items()}
        if "lambda_sweep" in kw:
            kw["lambda_sweep"] = tuple(float(v) for v in kw["lambda_sweep"])
        if "output_directory" in kw:
            kw["output_directory"] = base / kw["output_directory"]
        for k in ("lam", "significance_threshold", "relaxed_threshold", "wald_level"):
            if k in kw:
                kw[k] = float(kw[k])
        try:
            cfg = cls(**kw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        return cfg.override(**overrides)

    def override(self, **overrides) -> "StudyConfig":
        kw = {k: v for k, v in overrides.items() if v is not None}
        if "output_directory" in kw:
            kw["output_directory"] = Path(kw["output_directory"])
        return replace(self, **kw) if kw else self
