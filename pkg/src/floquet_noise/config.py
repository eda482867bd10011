"""JSON run configuration for the ``floquet-noise`` command line.

Every block rejects unknown keys.  Field errors come from pydantic; the
cross-field preconditions of the computation modules are checked afterwards
and reported together.
"""
from __future__ import annotations

import json
import math
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .coeffs import SEED_MAX, DriveSpec, Mode, NoiseSpec
from .lattice import MODE_CAP
from .monodromy import IntegratorCfg

COMMANDS = ("chart", "lyap", "theorem1", "lattice", "anderson", "oracle")


class ConfigError(ValueError):
    """All problems found in a config, each as (dotted.path, message)."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{p}: {m}" for p, m in self.errors))


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class Grid(_Block):
    """Either explicit ``values`` or ``start``/``stop``/``num`` (inclusive linspace)."""

    values: Optional[list[float]] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    num: Optional[int] = Field(default=None, ge=1)

    def points(self) -> list[float]:
        if self.values is not None:
            return [float(v) for v in self.values]
        if self.num == 1:
            return [float(self.start)]
        step = (self.stop - self.start) / (self.num - 1)
        return [self.start + i * step for i in range(self.num)]


def _grid(*values, start=None, stop=None, num=None):
    if values:
        return Grid(values=list(values))
    return Grid(start=start, stop=stop, num=num)


class DriveBlock(_Block):
    shape: Literal["cosine", "fourier_series"] = "cosine"
    amplitude: float = 0.2
    omega: float = Field(default=2.0, gt=0)
    fourier_cos: list[float] = []
    fourier_sin: list[float] = []

    def spec(self, amplitude=None) -> DriveSpec:
        return DriveSpec(self.amplitude if amplitude is None else amplitude, self.omega, self.shape,
                         self.fourier_cos, self.fourier_sin)


class ModeBlock(_Block):
    k: float = Field(default=1.5, ge=0)
    m_chi: float = Field(default=0.0, ge=0)

    def spec(self) -> Mode:
        return Mode(self.k, self.m_chi)


class NoiseBlock(_Block):
    sigma: float = Field(default=0.5, ge=0)
    distribution: Literal["uniform", "gaussian"] = "uniform"
    segments_per_period: int = Field(default=16, ge=1)

    def spec(self, seed: int, sigma=None) -> NoiseSpec:
        return NoiseSpec(self.sigma if sigma is None else sigma, self.distribution,
                         self.segments_per_period, seed)


class IntegratorBlock(_Block):
    steps_per_period: int = Field(default=512, ge=16)
    method: Literal["rk4"] = "rk4"

    def spec(self) -> IntegratorCfg:
        return IntegratorCfg(self.steps_per_period, self.method)


class _Command(_Block):
    master_seed: int = Field(default=0, ge=0, le=SEED_MAX)
    output_path: Optional[str] = None
    n_workers: int = Field(default=1, ge=1)
    integrator: IntegratorBlock = IntegratorBlock()


class ChartConfig(_Command):
    command: Literal["chart"] = "chart"
    drive: DriveBlock = DriveBlock()
    m_chi: float = Field(default=0.0, ge=0)
    k_grid: Grid = _grid(start=0.05, stop=3.0, num=60)
    P_grid: Grid = _grid(0.0, 0.2, 0.4, 0.8)


class LyapConfig(_Command):
    command: Literal["lyap"] = "lyap"
    drive: DriveBlock = DriveBlock()
    noise: NoiseBlock = NoiseBlock()
    m_chi: float = Field(default=0.0, ge=0)
    k_values: list[float] = [1.0, 1.5]
    P_values: list[float] = [0.2]
    sigma_values: list[float] = [0.0, 0.5]
    N: int = 2000
    n_batches: int = 10
    burn_in: int = Field(default=0, ge=0)


class Theorem1Config(_Command):
    command: Literal["theorem1"] = "theorem1"
    drive: DriveBlock = DriveBlock()
    mode: ModeBlock = ModeBlock()
    noise: NoiseBlock = NoiseBlock()
    N: int = 10000
    n_seeds: int = 20
    n_batches: int = 10
    burn_in: int = Field(default=0, ge=0)


class LatticeConfig(_Command):
    command: Literal["lattice"] = "lattice"
    drive: DriveBlock = DriveBlock()
    noise: NoiseBlock = NoiseBlock()
    m_chi: float = Field(default=1.0, ge=0)
    L_values: list[float] = [2 * math.pi]
    Lambda_values: list[float] = [1.5, 3.5]
    N: int = 1000
    n_batches: int = 10
    burn_in: int = Field(default=100, ge=0)
    homogeneous: bool = False
    mode_cap: int = Field(default=MODE_CAP, ge=1)


class PeriodicPotential(_Block):
    shape: Literal["cosine", "fourier_series"] = "cosine"
    amplitude: float = 1.0
    omega: float = Field(default=1.0, gt=0)
    fourier_cos: list[float] = []
    fourier_sin: list[float] = []

    def spec(self) -> DriveSpec:
        return DriveSpec(self.amplitude, self.omega, self.shape, self.fourier_cos, self.fourier_sin)


class RandomPotential(_Block):
    sigma: float = Field(default=0.3, ge=0)
    distribution: Literal["uniform", "gaussian"] = "uniform"
    segments_per_period: int = Field(default=4, ge=1)

    def spec(self, seed: int) -> NoiseSpec:
        return NoiseSpec(self.sigma, self.distribution, self.segments_per_period, seed)


class AndersonConfig(_Command):
    command: Literal["anderson"] = "anderson"
    mass: float = Field(default=0.5, gt=0)
    periodic: PeriodicPotential = PeriodicPotential()
    random: RandomPotential = RandomPotential()
    E_grid: Grid = _grid(start=0.1, stop=1.5, num=8)
    N: int = 2000
    n_batches: int = 10


class OracleConfig(_Command):
    command: Literal["oracle"] = "oracle"
    n_draws: int = Field(default=100, ge=1)
    omega_range: tuple[float, float] = (1.0, 3.0)
    positive_max: float = Field(default=1.5, gt=0)
    negative_max: float = Field(default=0.25, ge=0)
    segments_per_period: int = Field(default=16, ge=1)
    tolerance: float = Field(default=1e-8, gt=0)

    @field_validator("omega_range")
    @classmethod
    def _positive_range(cls, v):
        if not 0 < v[0] <= v[1]:
            raise ValueError("omega_range must satisfy 0 < low <= high")
        return v


RunConfig = Union[ChartConfig, LyapConfig, Theorem1Config, LatticeConfig, AndersonConfig, OracleConfig]
_MODELS = {m.model_fields["command"].default: m for m in RunConfig.__args__}


def _loc(loc) -> str:
    return ".".join(str(p) for p in loc) or "<root>"


def _ascending(seq):
    return all(b >= a for a, b in zip(seq, seq[1:]))


def _preconditions(cfg) -> list[tuple[str, str]]:
    errs = []

    def need(ok, path, msg):
        if not ok:
            errs.append((path, msg))

    sps = cfg.integrator.steps_per_period
    segs = None
    if hasattr(cfg, "noise"):
        segs = cfg.noise.segments_per_period
        need(sps % segs == 0, "integrator.steps_per_period",
             f"{sps} is not a multiple of noise.segments_per_period={segs}")
    if isinstance(cfg, AndersonConfig):
        segs = cfg.random.segments_per_period
        need(sps % segs == 0, "integrator.steps_per_period",
             f"{sps} is not a multiple of random.segments_per_period={segs}")
    if isinstance(cfg, OracleConfig):
        need(sps % cfg.segments_per_period == 0, "integrator.steps_per_period",
             f"{sps} is not a multiple of segments_per_period={cfg.segments_per_period}")
    if hasattr(cfg, "N"):
        minimum = 1000 if isinstance(cfg, AndersonConfig) else 100
        need(cfg.N >= minimum, "N", f"must be >= {minimum}")
        need(cfg.n_batches >= 2 and cfg.N % cfg.n_batches == 0, "n_batches",
             f"must be >= 2 and divide N={cfg.N}")
    for name in ("k_grid", "P_grid", "E_grid"):
        grid = getattr(cfg, name, None)
        if grid is None:
            continue
        explicit = grid.values is not None
        range_fields = [grid.start, grid.stop, grid.num]
        ranged = all(v is not None for v in range_fields)
        partial = any(v is not None for v in range_fields) and not ranged
        if explicit == ranged or partial:
            errs.append((name, "give either values or start/stop/num"))
            continue
        pts = grid.points()
        need(len(pts) > 0, name, "must be non-empty")
        need(_ascending(pts), name, "must be ascending")
    for name in ("k_values", "P_values", "sigma_values", "L_values", "Lambda_values"):
        seq = getattr(cfg, name, None)
        if seq is None:
            continue
        need(len(seq) > 0, name, "must be non-empty")
        need(_ascending(seq), name, "must be ascending")
    if isinstance(cfg, ChartConfig):
        need(all(k >= 0 for k in cfg.k_grid.points()), "k_grid", "wavenumbers must be >= 0")
    if isinstance(cfg, LyapConfig):
        need(all(k >= 0 for k in cfg.k_values), "k_values", "wavenumbers must be >= 0")
        need(all(s >= 0 for s in cfg.sigma_values), "sigma_values", "must be >= 0")
    if isinstance(cfg, Theorem1Config):
        need(cfg.n_seeds >= 20, "n_seeds", "must be >= 20")
    if isinstance(cfg, LatticeConfig):
        need(all(v > 0 for v in cfg.L_values), "L_values", "must be positive")
        need(all(v > 0 for v in cfg.Lambda_values), "Lambda_values", "must be positive")
        if cfg.L_values and cfg.Lambda_values:
            n = 2 * math.floor(max(cfg.Lambda_values) * max(cfg.L_values) / (2 * math.pi)) + 1
            need(n <= cfg.mode_cap, "Lambda_values",
                 f"largest cell retains {n} modes, above mode_cap={cfg.mode_cap}")
    if isinstance(cfg, (ChartConfig, LyapConfig, Theorem1Config, LatticeConfig)):
        d = cfg.drive
        need(d.shape != "fourier_series" or bool(d.fourier_cos or d.fourier_sin), "drive.fourier_cos",
             "fourier_series drive needs at least one coefficient")
    return errs


def parse_config(text: bytes | str, command: str | None = None):
    """Validate a JSON config, filling documented defaults.

    ``command`` (from the command line) is used when the JSON has no
    ``command`` key and must agree with it otherwise.  Raises ConfigError
    listing every problem with its dotted key path.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError([("<root>", f"not UTF-8: {exc}")]) from None
    try:
        raw = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError([("<root>", f"malformed JSON: {exc}")]) from None
    if not isinstance(raw, dict):
        raise ConfigError([("<root>", "config must be a JSON object")])
    name = raw.get("command", command)
    if command is not None and name != command:
        raise ConfigError([("command", f"config says {name!r} but {command!r} was requested")])
    if name not in _MODELS:
        raise ConfigError([("command", f"must be one of {', '.join(COMMANDS)}, got {name!r}")])
    raw = {**raw, "command": name}
    try:
        cfg = _MODELS[name].model_validate(raw)
    except ValidationError as exc:
        raise ConfigError([(_loc(e["loc"]), e["msg"]) for e in exc.errors()]) from None
    errs = _preconditions(cfg)
    if errs:
        raise ConfigError(errs)
    return cfg


def canonical_json(cfg) -> str:
    """Config with defaults filled, minus the fields that must not affect results."""
    data = cfg.model_dump(mode="json", exclude={"output_path", "n_workers"})
    return json.dumps(data, sort_keys=True, separators=(",", ":"))
