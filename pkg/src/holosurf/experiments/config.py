"""Sweep configuration and its flat ``key = value`` text format.

Example::

    experiment = GAIN_VS_SPACING
    L = 2
    d = 0.5, 0.25, 0.1, 0.05
    pattern = iso, dir3gpp, dipole
    target = normal

Lists are comma-separated; ``#`` starts a comment. Unknown keys are
rejected so that typos do not silently fall back to defaults.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, fields
from typing import Optional, Tuple

from ..errors import ConfigurationError
from ..coupling import DEFAULT_GAMMA
from ..radiation import DEFAULT_N_AZIMUTH, DEFAULT_N_POLAR, PatternKind


class Experiment(str, enum.Enum):
    COUPLING_SWEEP = "COUPLING_SWEEP"
    GAIN_VS_SPACING = "GAIN_VS_SPACING"
    GAIN_VS_DIRECTION = "GAIN_VS_DIRECTION"
    PATTERN_CUT = "PATTERN_CUT"
    GAIN_VS_APERTURE = "GAIN_VS_APERTURE"
    CSI_ERROR_MC = "CSI_ERROR_MC"


SUBCOMMANDS = {
    "coupling": Experiment.COUPLING_SWEEP,
    "gain-spacing": Experiment.GAIN_VS_SPACING,
    "gain-direction": Experiment.GAIN_VS_DIRECTION,
    "pattern-cut": Experiment.PATTERN_CUT,
    "aperture": Experiment.GAIN_VS_APERTURE,
    "csi-mc": Experiment.CSI_ERROR_MC,
}

TARGETS = ("normal", "endfire")


@dataclass(frozen=True)
class SweepConfig:
    experiment: Experiment
    L: Tuple[float, ...] = (2.0,)
    d: Tuple[float, ...] = (0.5, 0.05)
    pattern: Tuple[str, ...] = ("iso",)
    # None binds the dipole length to the grid pitch (l = d).
    dipole_length: Optional[float] = None
    target: Tuple[str, ...] = ("normal",)
    gamma: float = DEFAULT_GAMMA
    quad_polar: int = DEFAULT_N_POLAR
    quad_azimuth: int = DEFAULT_N_AZIMUTH
    # coupling sweep
    axis: str = "Y"
    max_distance: float = 2.0
    step: float = 0.01
    # direction sweep / pattern cut
    sweep: str = "horizontal"
    angle_step: float = 1.0
    cut_step: float = 0.02
    # Monte Carlo
    trials: int = 10_000
    sigma: Tuple[float, ...] = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)
    seed: Optional[int] = None
    out: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "experiment", Experiment(self.experiment))
        for name in ("L", "d", "sigma"):
            object.__setattr__(self, name, tuple(float(v) for v in _as_tuple(getattr(self, name))))
        for name in ("pattern", "target"):
            object.__setattr__(self, name, tuple(str(v) for v in _as_tuple(getattr(self, name))))
        object.__setattr__(self, "axis", self.axis.upper())
        self.validate()

    def validate(self):
        for p in self.pattern:
            try:
                PatternKind(p)
            except ValueError:
                raise ConfigurationError(f"unknown pattern {p!r}") from None
        for t in self.target:
            if t not in TARGETS:
                raise ConfigurationError(f"target must be one of {TARGETS}, got {t!r}")
        if any(v <= 0 for v in self.L + self.d):
            raise ConfigurationError("apertures and spacings must be positive")
        if self.experiment is not Experiment.COUPLING_SWEEP:
            for L in self.L:
                for d in self.d:
                    ratio = L / d
                    if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
                        raise ConfigurationError(f"spacing {d} does not divide aperture {L}")
        if self.axis not in ("Y", "Z", "YZ"):
            raise ConfigurationError(f"axis must be Y, Z or YZ, got {self.axis!r}")
        if self.sweep not in ("horizontal", "vertical"):
            raise ConfigurationError(f"sweep must be horizontal or vertical, got {self.sweep!r}")
        if self.dipole_length is not None and self.dipole_length <= 0:
            raise ConfigurationError("dipole_length must be positive")
        if min(self.step, self.angle_step, self.cut_step, self.max_distance) <= 0:
            raise ConfigurationError("step sizes and max_distance must be positive")
        if self.quad_polar < 1 or self.quad_azimuth < 1:
            raise ConfigurationError("quadrature sizes must be positive")
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if any(s < 0 for s in self.sigma):
            raise ConfigurationError("sigma values must be nonnegative")
        if self.experiment is Experiment.CSI_ERROR_MC and self.seed is None:
            raise ConfigurationError("CSI_ERROR_MC requires a seed")

    def replace(self, **changes) -> "SweepConfig":
        return dataclasses.replace(self, **changes)


def _as_tuple(value):
    if isinstance(value, (list, tuple)):
        return tuple(value)
    return (value,)


_FIELD_TYPES = {f.name: f for f in fields(SweepConfig)}
_TUPLE_FLOAT = {"L", "d", "sigma"}
_TUPLE_STR = {"pattern", "target"}
_INT = {"quad_polar", "quad_azimuth", "trials", "seed"}
_FLOAT = {"dipole_length", "gamma", "max_distance", "step", "angle_step", "cut_step"}


def _convert(key: str, raw: str):
    raw = raw.strip()
    if key not in _FIELD_TYPES:
        raise ConfigurationError(f"unknown config key {key!r}")
    if raw.lower() in ("", "none", "null"):
        return None
    try:
        if key in _TUPLE_FLOAT:
            return tuple(float(v) for v in raw.split(","))
        if key in _TUPLE_STR:
            return tuple(v.strip() for v in raw.split(",") if v.strip())
        if key in _INT:
            return int(raw)
        if key in _FLOAT:
            return float(raw)
    except ValueError:
        raise ConfigurationError(f"bad value for {key}: {raw!r}") from None
    return raw


def parse_config(text: str, overrides: Optional[dict] = None,
                 experiment: Optional[Experiment] = None) -> SweepConfig:
    """Parse ``key = value`` lines; ``overrides`` (raw strings) win."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value'")
        key, raw = line.split("=", 1)
        key = key.strip()
        values[key] = _convert(key, raw)
    for key, raw in (overrides or {}).items():
        values[key] = _convert(key, raw)
    if experiment is not None:
        if "experiment" in values and Experiment(values["experiment"]) is not experiment:
            raise ConfigurationError(
                f"config is for {values['experiment']}, subcommand runs {experiment.value}"
            )
        values["experiment"] = experiment
    if "experiment" not in values:
        raise ConfigurationError("config must name an experiment")
    values = {k: v for k, v in values.items() if v is not None or k in ("dipole_length", "seed", "out")}
    try:
        return SweepConfig(**values)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from None


def emit_config(cfg: SweepConfig) -> str:
    """Inverse of :func:`parse_config`; floats are written with ``repr``."""
    lines = []
    for f in fields(SweepConfig):
        value = getattr(cfg, f.name)
        if isinstance(value, enum.Enum):
            text = value.value
        elif value is None:
            text = "none"
        elif isinstance(value, tuple):
            text = ", ".join(repr(v) if isinstance(v, float) else str(v) for v in value)
        else:
            text = repr(value) if isinstance(value, float) else str(value)
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"
