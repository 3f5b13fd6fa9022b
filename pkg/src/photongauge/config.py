"""Experiment configuration: a TOML file validated against a strict schema.

Every key is optional; unknown keys anywhere are rejected. See
``configs/experiment.toml`` in the repository for an annotated example.
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ConfigError
from .report import DEFAULT_TOLERANCES

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

TIER_POINTS = {"fast": 64, "reference": 96}

Vec3 = tuple[float, float, float]


def _unit(v: Vec3) -> Vec3:
    n = math.sqrt(sum(x * x for x in v))
    if abs(n - 1.0) > 1e-12:
        raise ValueError(f"gauge vector {list(v)} must have unit length (|I| = {n:.15g})")
    return v


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GridConfig(_Section):
    points: int | None = Field(default=None, ge=8, description="points per axis; overrides the tier")
    widths: float = Field(default=10.0, ge=10.0, description="half-extent in envelope widths")


class PacketConfig(_Section):
    k0: Vec3 = (1.0, 1.0, 1.0)
    relative_width: float = Field(default=0.05, gt=0, lt=0.2)
    gauge: Vec3 = (0.0, 0.0, 1.0)
    r0: Vec3 = (3.0, -2.0, 1.0)

    @field_validator("gauge")
    @classmethod
    def check_gauge(cls, v):
        return _unit(v)


class BerryFluxConfig(_Section):
    radii: list[float] = [0.5, 1.0, 4.0]
    n_theta: int = Field(default=64, ge=8)
    n_phi: int = Field(default=64, ge=8)
    coarse_nodes: int = Field(default=16, ge=8)
    n_random: int = Field(default=100, ge=1)
    gauges: list[Vec3] = [(0.0, 0.0, 1.0), (1.0, 0.0, 0.0)]
    min_string_angle_deg: float = Field(default=30.0, gt=0, lt=90)
    convergence_point: Vec3 = (1.0, 1.0, 0.5)

    @field_validator("gauges")
    @classmethod
    def check_gauges(cls, v):
        return [_unit(g) for g in v]

    @field_validator("radii")
    @classmethod
    def check_radii(cls, v):
        if not v or any(r <= 0 for r in v):
            raise ValueError("radii must be a non-empty list of positive numbers")
        return v


class OamSpectrumConfig(_Section):
    charges: list[int] = [-3, -2, -1, 0, 1, 2, 3]
    divergence: float = Field(default=0.05, gt=0, lt=0.2)
    k0: float = Field(default=1.0, gt=0)
    gauge_perpendicular: Vec3 = (1.0, 0.0, 0.0)
    gauge_parallel: Vec3 = (0.0, 0.0, 1.0)
    scaling_charges: list[int] = [0, 2]

    @field_validator("gauge_perpendicular", "gauge_parallel")
    @classmethod
    def check_gauge(cls, v):
        return _unit(v)

    @field_validator("charges", "scaling_charges")
    @classmethod
    def check_charges(cls, v):
        if any(abs(l) > 6 for l in v):
            raise ValueError("vortex charges must satisfy |l| <= 6")
        return v


class BarycenterConfig(_Section):
    theta_deg: list[float] = [30.0, 45.0, 60.0]
    azimuth_deg: float = 0.0
    k0: float = Field(default=1.0, gt=0)
    relative_width: float = Field(default=0.01, gt=0, lt=0.2)
    aspect: float = Field(default=0.5, gt=0, le=1.0, description="delta_par / delta_perp")
    gauge: Vec3 = (0.0, 0.0, 1.0)

    @field_validator("gauge")
    @classmethod
    def check_gauge(cls, v):
        return _unit(v)


class GaugeShiftConfig(_Section):
    k0: Vec3 = (1.0, 0.5, 0.7)
    relative_width: float = Field(default=0.01, gt=0, lt=0.2)
    gauge: Vec3 = (0.0, 0.0, 1.0)
    gauge_prime: Vec3 = (1.0, 0.0, 0.0)

    @field_validator("gauge", "gauge_prime")
    @classmethod
    def check_gauge(cls, v):
        return _unit(v)


class SpinCheckConfig(_Section):
    n_random: int = Field(default=1000, ge=1)
    divergence: float = Field(default=0.01, gt=0, lt=0.2)
    gauge: Vec3 = (1.0, 0.0, 0.0)

    @field_validator("gauge")
    @classmethod
    def check_gauge(cls, v):
        return _unit(v)


class ExperimentConfig(_Section):
    experiment: Literal["berry-flux", "commutators", "oam-spectrum", "barycenter",
                        "gauge-shift", "spin-check", "all"] = "all"
    seed: int = Field(default=20240917, ge=0, lt=2**64)
    tier: Literal["fast", "reference"] = "fast"
    output: str = "results"
    hbar: float = Field(default=1.0, gt=0)
    c: float = Field(default=1.0, gt=0)
    grid: GridConfig = GridConfig()
    packet: PacketConfig = PacketConfig()
    berry_flux: BerryFluxConfig = BerryFluxConfig()
    oam_spectrum: OamSpectrumConfig = OamSpectrumConfig()
    barycenter: BarycenterConfig = BarycenterConfig()
    gauge_shift: GaugeShiftConfig = GaugeShiftConfig()
    spin_check: SpinCheckConfig = SpinCheckConfig()
    tolerances: dict[str, float] = {}

    @field_validator("tolerances")
    @classmethod
    def check_tolerances(cls, v):
        unknown = sorted(set(v) - set(DEFAULT_TOLERANCES))
        if unknown:
            raise ValueError(f"unknown tolerance name(s) {unknown}; known: {sorted(DEFAULT_TOLERANCES)}")
        if any(not t > 0 for t in v.values()):
            raise ValueError("tolerances must be positive")
        return v

    @property
    def points(self) -> int:
        return self.grid.points if self.grid.points is not None else TIER_POINTS[self.tier]

    def tolerance(self, family: str) -> float:
        return self.tolerances.get(family, DEFAULT_TOLERANCES[family])

    def echo(self) -> dict:
        return self.model_dump(mode="json")


def parse_config(data: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(data)
