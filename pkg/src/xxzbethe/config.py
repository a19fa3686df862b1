"""TOML run configuration.

A run file looks like::

    [model]
    n = 4
    two_s = 1
    r = 7
    q = 5
    case = "Case2AlphaAlpha"
    alpha_minus = [0.0, 0.45]
    alpha_plus = [0.0, 0.87]
    theta = 0.54

    [solver]
    tol = 1e-10
    max_iter = 50

    [sweep]
    theta = [0.3, 0.54]

    [[seeds]]
    roots = [[0.475167, 0.000593], ...]

Case-fixed boundary values may be left out; eta is always derived from r and q.
"""

from __future__ import annotations

import itertools
import logging
import os
import tomllib
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError, field_validator

from .exceptions import ConfigError
from .models import ModelParams, coerce_complex

logger = logging.getLogger(__name__)

RESULTS_ENV = "XXZ_RESULTS_DIR"
DEFAULT_RESULTS_ROOT = Path("runs")

_SWEEPABLE = {*ModelParams.model_fields, "theta"}


class SolverSettings(BaseModel):
    """Newton and scheduling knobs."""

    model_config = {"frozen": True, "extra": "forbid"}

    tol: float = Field(1e-10, gt=0, description="Bethe residual tolerance")
    max_iter: int = Field(50, ge=1, description="Newton iteration cap")
    jobs: int = Field(1, ge=1, description="Worker processes for sweeps")
    seed: int = Field(0, description="Seed for sample points and random checks")


class SeedLevel(BaseModel):
    """Starting roots for one level."""

    model_config = {"frozen": True}

    roots: tuple[complex, ...] = Field(description="Roots as [re, im] pairs or numbers")

    @field_validator("roots", mode="before")
    @classmethod
    def coerce_roots(cls, value: Any) -> Any:
        if isinstance(value, (list, tuple)):
            return tuple(coerce_complex(v) for v in value)
        return value


class RunConfig(BaseModel):
    """A parsed run file.

    Examples:
        >>> cfg = RunConfig.model_validate({"model": {"n": 2, "two_s": 1, "r": 2, "q": 3, "case": 2,
        ...                                           "alpha_minus": [0, 0.4], "alpha_plus": [0, 0.9]}})
        >>> [p.theta for p in cfg.grid()]
    """

    model_config = {"frozen": True, "extra": "forbid"}

    model: ModelParams = Field(description="Chain parameters")
    solver: SolverSettings = Field(default_factory=SolverSettings, description="Solver settings")
    sweep: dict[str, list[Any]] = Field(default_factory=dict, description="Grid of [model] overrides")
    seeds: tuple[SeedLevel, ...] = Field(default=(), description="Seed roots per level")

    @field_validator("sweep")
    @classmethod
    def validate_sweep_keys(cls, value: dict[str, list[Any]]) -> dict[str, list[Any]]:
        unknown = sorted(set(value) - _SWEEPABLE)
        if unknown:
            raise ValueError(f"Unknown sweep keys: {', '.join(unknown)}")
        empty = sorted(key for key, values in value.items() if not values)
        if empty:
            raise ValueError(f"Sweep keys without values: {', '.join(empty)}")
        return value

    def seed_roots(self) -> list[tuple[complex, ...]]:
        return [level.roots for level in self.seeds]

    def grid(self) -> list[ModelParams]:
        """Every [model] variant of the sweep, keys taken in sorted order."""
        if not self.sweep:
            return [self.model]
        keys = sorted(self.sweep)
        points = []
        for values in itertools.product(*(self.sweep[key] for key in keys)):
            try:
                points.append(self.model.with_changes(**dict(zip(keys, values, strict=True))))
            except ValidationError as e:
                point = dict(zip(keys, values, strict=True))
                raise ConfigError("Invalid sweep point", context={"point": point}, cause=e) from e
        return points

    def echo(self) -> dict[str, Any]:
        """Resolved configuration, stored verbatim in run records."""
        return {
            "model": self.model.model_dump(),
            "solver": self.solver.model_dump(),
            "sweep": dict(self.sweep),
            "seeds": [list(level.roots) for level in self.seeds],
        }


def config_from_mapping(data: Mapping[str, Any], path: str | None = None) -> RunConfig:
    """Validate an already-parsed mapping; pydantic errors become ConfigError."""
    try:
        return RunConfig.model_validate(dict(data))
    except ValidationError as e:
        raise ConfigError(
            f"Invalid configuration: {e.error_count()} error(s)",
            path=path,
            cause=e,
            context={"errors": [err["msg"] for err in e.errors()]},
        ) from e


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a TOML run file."""
    path = Path(path)
    try:
        with path.open("rb") as handle:
            data = tomllib.load(handle)
    except OSError as e:
        raise ConfigError(f"Cannot read configuration: {e}", path=str(path), cause=e) from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Malformed TOML: {e}", path=str(path), cause=e) from e
    logger.debug("Loaded configuration from %s", path)
    return config_from_mapping(data, str(path))


def results_root(out: str | Path | None = None) -> Path:
    """Output root: explicit ``out``, then $XXZ_RESULTS_DIR, then ./runs."""
    if out:
        return Path(out)
    env = os.environ.get(RESULTS_ENV)
    if env:
        return Path(env)
    return DEFAULT_RESULTS_ROOT
