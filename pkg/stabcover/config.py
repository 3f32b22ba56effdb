"""Runtime configuration: defaults < YAML file < STABCOVER_* env < CLI flags."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Dict, Mapping

import yaml
from pydantic import BaseModel, Field

ENV_PREFIX = "STABCOVER_"


class Config(BaseModel):
    """Knobs for enumeration ceilings, sampling sizes and search budgets."""

    model_config = {"frozen": True, "extra": "forbid"}

    max_rank: int = Field(4, gt=0, description="Largest rank accepted by root-system builders")
    path_samples: int = Field(100, gt=0, description="Random positive paths per arrangement")
    loop_samples: int = Field(100, gt=0, description="Random positive loops per arrangement")
    point_samples: int = Field(1000, gt=0, description="Generic complex points for coverage")
    piece_samples: int = Field(100, gt=0, description="Points pushed through each frame")
    pair_samples: int = Field(1000, gt=0, description="Random positive-path pairs")
    stability_samples: int = Field(100, gt=0, description="(loop, stability point) pairs")
    monodromy_samples: int = Field(50, gt=0, description="Rectangular loops lifted")
    budget: int = Field(20000, gt=0, description="State budget for word-problem closures")
    refinement_depth: int = Field(32, gt=0, description="Bisection depth for path lifting")
    gallery_cap: int = Field(64, gt=0, description="Minimal galleries checked per chamber")
    max_path_length: int = Field(10, gt=0, description="Length bound for random paths")
    sample_window: int = Field(6, gt=0, description="Numerator/denominator window for samples")
    seed: int = Field(0, ge=0, description="Base seed; samples derive per-index seeds")
    include_timing: bool = Field(False, description="Attach wall-clock timing to reports")

    def merged(self, overrides: Mapping[str, Any]) -> "Config":
        """Return a copy with non-None overrides applied and re-validated."""
        data = self.model_dump()
        data.update({key: value for key, value in overrides.items() if value is not None})
        return Config.model_validate(data)


def _env_overrides(environ: Mapping[str, str]) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}
    for name, field in Config.model_fields.items():
        raw = environ.get(ENV_PREFIX + name.upper())
        if raw is None:
            continue
        if field.annotation is bool:
            overrides[name] = raw.lower() in ("1", "true", "yes")
        else:
            overrides[name] = raw
    return overrides


def load_config(
    path: str | Path | None = None,
    *,
    environ: Mapping[str, str] | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> Config:
    """Build a Config from an optional YAML file, the environment and overrides."""
    data: Dict[str, Any] = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as handle:
            loaded = yaml.safe_load(handle) or {}
        if not isinstance(loaded, dict):
            raise ValueError(f"Config file {path} must contain a mapping")
        data.update(loaded)

    data.update(_env_overrides(os.environ if environ is None else environ))
    if overrides:
        data.update({key: value for key, value in overrides.items() if value is not None})
    return Config.model_validate(data)
