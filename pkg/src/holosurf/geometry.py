"""Array geometries and far-field directions.

All lengths are expressed in wavelengths. Directions follow the usual
spherical convention: ``theta`` is the polar angle from +z and ``phi`` the
azimuth in the x-y plane measured from +x. A planar surface lies in the
y-z plane, so its broadside (normal) direction is +x.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError, DomainError

_ANGLE_SLACK = 1e-12
_INTEGER_SLACK = 1e-9


class Layout(str, enum.Enum):
    ULA_Z = "ULA_Z"
    URA_YZ = "URA_YZ"
    ARBITRARY = "ARBITRARY"


@dataclass(frozen=True)
class Direction:
    """A far-field direction ``(theta, phi)`` in radians."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (-_ANGLE_SLACK <= self.theta <= np.pi + _ANGLE_SLACK):
            raise DomainError(f"theta={self.theta!r} outside [0, pi]")
        if not (-np.pi - _ANGLE_SLACK <= self.phi <= np.pi + _ANGLE_SLACK):
            raise DomainError(f"phi={self.phi!r} outside [-pi, pi]")

    @classmethod
    def from_degrees(cls, theta_deg: float, phi_deg: float) -> "Direction":
        return cls(np.deg2rad(theta_deg), np.deg2rad(phi_deg))

    @property
    def unit(self) -> np.ndarray:
        return direction_to_unit(self)


NORMAL = Direction(np.pi / 2, 0.0)
ENDFIRE = Direction(np.pi / 2, np.pi / 2)


def direction_to_unit(direction: Direction) -> np.ndarray:
    """Return ``(sin t cos p, sin t sin p, cos t)`` as a length-3 array."""
    if not isinstance(direction, Direction):
        direction = Direction(*direction)
    st = np.sin(direction.theta)
    return np.array(
        [st * np.cos(direction.phi), st * np.sin(direction.phi), np.cos(direction.theta)]
    )


def angles_to_units(theta, phi) -> np.ndarray:
    """Vectorized ``direction_to_unit``; broadcasts ``theta`` and ``phi``.

    Range checks are skipped here; callers sweep angles they generate.
    """
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """Element centres of a planar array, in wavelengths.

    ``positions`` has shape ``(N, 3)`` and is made read-only on construction.
    """

    positions: np.ndarray
    layout: Layout = Layout.ARBITRARY
    aperture_side: Optional[float] = None
    spacing: Optional[float] = None

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float, copy=True)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise ConfigurationError(f"positions must have shape (N, 3), got {pos.shape}")
        if not np.all(np.isfinite(pos)):
            raise ConfigurationError("positions must be finite")
        if pos.shape[0] > 1:
            # Pairwise distinctness; sort-based so large URAs stay cheap.
            keys = np.round(pos / 1e-12).astype(np.int64)
            if np.unique(keys, axis=0).shape[0] != pos.shape[0]:
                raise ConfigurationError("element positions must be pairwise distinct")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "layout", Layout(self.layout))

    @property
    def n_elements(self) -> int:
        return self.positions.shape[0]

    def __len__(self):
        return self.n_elements

    def translated(self, offset) -> "ArrayGeometry":
        return ArrayGeometry(self.positions + np.asarray(offset, float), Layout.ARBITRARY)

    def __repr__(self):
        return (
            f"ArrayGeometry(N={self.n_elements}, layout={self.layout.value}, "
            f"aperture_side={self.aperture_side}, spacing={self.spacing})"
        )


def _grid_count(L: float, d: float) -> int:
    if not (L > 0 and d > 0):
        raise ConfigurationError(f"aperture and spacing must be positive (L={L}, d={d})")
    ratio = L / d
    n = int(round(ratio))
    if n < 1 or abs(ratio - n) > _INTEGER_SLACK * max(1.0, ratio):
        raise ConfigurationError(f"L/d = {ratio!r} is not a positive integer")
    return n


def build_ura(L: float, d: float) -> ArrayGeometry:
    """Square URA of side ``L`` and pitch ``d`` in the x = 0 plane.

    Elements sit at the centres of the ``(L/d)**2`` grid cells. Ordering is
    row-major with z descending, then y ascending.
    """
    n = _grid_count(L, d)
    centres = (np.arange(n) - (n - 1) / 2.0) * d
    zz, yy = np.meshgrid(centres[::-1], centres, indexing="ij")
    pos = np.column_stack([np.zeros(n * n), yy.ravel(), zz.ravel()])
    return ArrayGeometry(pos, Layout.URA_YZ, aperture_side=float(L), spacing=float(d))


def build_ula(N: int, d: float) -> ArrayGeometry:
    """``N`` elements on the z axis with pitch ``d``, centred on the origin.

    The first element has the largest z, so for ``N = 2`` the positions are
    ``(0, 0, d/2)`` and ``(0, 0, -d/2)``.
    """
    if int(N) != N or N < 1:
        raise ConfigurationError(f"N must be a positive integer, got {N!r}")
    if not d > 0:
        raise ConfigurationError(f"spacing must be positive, got {d!r}")
    N = int(N)
    z = ((N - 1) / 2.0 - np.arange(N)) * d
    pos = np.column_stack([np.zeros(N), np.zeros(N), z])
    return ArrayGeometry(pos, Layout.ULA_Z, spacing=float(d))
