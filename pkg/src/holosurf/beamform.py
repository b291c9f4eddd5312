"""Steering vectors, beamformers, gains and surface radiation patterns.

The gain of a beamformer ``f`` toward ``u0`` is
``|h(u0) A f|^2 / ||f||^2`` where ``h`` is the element steering vector and
``A`` the coupling transfer matrix. Conventional beamforming matches ``h``
alone; optimal beamforming matches the coupled channel ``h A``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .coupling import TransferMatrix
from .errors import DegenerateDirectionError, DomainError, MeasurementError
from .geometry import ArrayGeometry, Direction, direction_to_unit
from .radiation import RadiationPattern

TransferLike = Union[TransferMatrix, np.ndarray, None]


class BeamKind(str, enum.Enum):
    CONVENTIONAL = "CONVENTIONAL"
    OPTIMAL = "OPTIMAL"


@dataclass(frozen=True, eq=False)
class SteeringVector:
    entries: np.ndarray
    direction: Direction
    pattern: RadiationPattern = field(repr=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class BeamformingVector:
    entries: np.ndarray
    total_power: float
    kind: BeamKind


@dataclass(frozen=True)
class GainResult:
    gain_linear: float
    direction: Direction
    kind: Optional[BeamKind] = None

    @property
    def gain_db(self) -> float:
        return float(10.0 * np.log10(self.gain_linear)) if self.gain_linear > 0 else -np.inf


def _as_direction(direction) -> Direction:
    return direction if isinstance(direction, Direction) else Direction(*direction)


def _apply(A: TransferLike, x: np.ndarray) -> np.ndarray:
    if A is None:
        return x
    if isinstance(A, TransferMatrix):
        return A.apply(x)
    return np.asarray(A) @ x


def _entries(x):
    return x.entries if hasattr(x, "entries") else np.asarray(x)


def steering_vectors(geom: ArrayGeometry, pattern: RadiationPattern, units) -> np.ndarray:
    """Steering vectors for a stack of unit vectors, shape ``(..., N)``."""
    units = np.asarray(units, float)
    amp = np.sqrt(pattern(units))
    phase = 2.0 * np.pi * (units @ geom.positions.T)
    return amp[..., None] * np.exp(1j * phase)


def steering_vector(geom: ArrayGeometry, pattern: RadiationPattern, direction) -> SteeringVector:
    """``h_n = sqrt(R(u0)) exp(2j pi u0 . t_n)`` (far-field prefactor omitted)."""
    direction = _as_direction(direction)
    h = steering_vectors(geom, pattern, direction_to_unit(direction))
    return SteeringVector(h, direction, pattern)


def conventional_bf(h: SteeringVector, total_power: float = 1.0) -> BeamformingVector:
    """Matched filter to the uncoupled steering vector."""
    hv = _entries(h)
    norm = np.linalg.norm(hv)
    if not norm > 0:
        raise DegenerateDirectionError("steering vector vanishes at this direction")
    f = np.sqrt(total_power) * hv.conj() / norm
    return BeamformingVector(f, float(total_power), BeamKind.CONVENTIONAL)


def optimal_bf(h: SteeringVector, A: TransferLike, total_power: float = 1.0) -> BeamformingVector:
    """Matched filter to the coupled channel, ``f ~ A h^H``."""
    hv = _entries(h)
    g = _apply(A, hv.conj())
    norm = np.linalg.norm(g)
    if not norm > 1e-13 * np.linalg.norm(hv):
        raise DegenerateDirectionError(
            "steering vector lies in the discarded eigenspace of the coupling matrix"
        )
    f = np.sqrt(total_power) * g / norm
    return BeamformingVector(f, float(total_power), BeamKind.OPTIMAL)


def gain(h: SteeringVector, A: TransferLike, f: BeamformingVector) -> GainResult:
    hv, fv = _entries(h), _entries(f)
    if hv.shape != fv.shape:
        raise DomainError(f"dimension mismatch: h {hv.shape}, f {fv.shape}")
    fnorm2 = float(np.vdot(fv, fv).real)
    if not fnorm2 > 0:
        raise DomainError("beamforming vector has zero norm")
    value = abs(hv @ _apply(A, fv)) ** 2 / fnorm2
    return GainResult(float(value), getattr(h, "direction", None), getattr(f, "kind", None))


def optimal_gain_bound(h: SteeringVector, A: TransferLike) -> float:
    """``||h A||^2``, the largest gain any beamformer can reach."""
    hv = _entries(h)
    return float(np.linalg.norm(_apply(A, hv.conj())) ** 2)


def surface_pattern_units(geom: ArrayGeometry, pattern: RadiationPattern, A: TransferLike,
                          f, units) -> np.ndarray:
    """Surface power pattern ``|h(u) A f|^2 / ||f||^2`` at many unit vectors."""
    fv = _entries(f)
    fnorm2 = float(np.vdot(fv, fv).real)
    if not fnorm2 > 0:
        raise DomainError("beamforming vector has zero norm")
    w = _apply(A, fv)
    units = np.asarray(units, float)
    flat = units.reshape(-1, 3)
    out = np.empty(flat.shape[0])
    # Row blocks keep the (M, N) steering matrix small for large arrays.
    block = max(1, 2**22 // max(1, geom.n_elements))
    for s in range(0, flat.shape[0], block):
        H = steering_vectors(geom, pattern, flat[s:s + block])
        out[s:s + block] = np.abs(H @ w) ** 2 / fnorm2
    return out.reshape(units.shape[:-1])


def surface_pattern(geom: ArrayGeometry, pattern: RadiationPattern, A: TransferLike,
                    f, direction) -> float:
    """Surface pattern at a single direction; equals :func:`gain` there."""
    h = steering_vector(geom, pattern, direction)
    return gain(h, A, f).gain_linear


# ---------------------------------------------------------------------------
# Two-element closed forms
# ---------------------------------------------------------------------------

_SERIES_SWITCH = 1e-8


def _one_minus_sinc(x):
    """``1 - sin(x)/x`` (argument in radians), accurate for small ``x``."""
    x2 = x * x
    if 1.0 - np.sin(x) / x >= _SERIES_SWITCH:
        return 1.0 - np.sin(x) / x
    return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))


@dataclass(frozen=True)
class TwoElementResult:
    G_conv: float
    G_opt: float
    f_conv: np.ndarray
    f_opt: np.ndarray
    psi: float
    s: float


def two_element_closed_form(d: float, theta: float, total_power: float = 1.0) -> TwoElementResult:
    """Closed-form gains and beamformers of a two-element isotropic ULA.

    The elements sit at ``(0, 0, +d/2)`` and ``(0, 0, -d/2)``; ``theta`` is
    the polar angle of the target. ``1 - s`` is evaluated by its Taylor
    series when it drops below 1e-8.
    """
    if not d > 0:
        raise DomainError(f"spacing must be positive, got {d!r}")
    psi = np.pi * d * np.cos(theta)
    x = 2.0 * np.pi * d
    s = float(np.sin(x) / x)
    one_plus = 1.0 + s
    one_minus = _one_minus_sinc(x)
    c2, s2 = np.cos(psi) ** 2, np.sin(psi) ** 2
    G_conv = 2.0 * (c2 / np.sqrt(one_plus) + s2 / np.sqrt(one_minus)) ** 2
    G_opt = 2.0 * (c2 / one_plus + s2 / one_minus)
    f_conv = np.sqrt(total_power / 2.0) * np.array([np.exp(-1j * psi), np.exp(1j * psi)])
    a = np.cos(psi) / np.sqrt(one_plus)
    b = np.sin(psi) / np.sqrt(one_minus)
    v = np.array([a - 1j * b, a + 1j * b])  # equals A h^H up to scale
    f_opt = np.sqrt(total_power) * v / np.linalg.norm(v)
    return TwoElementResult(float(G_conv), float(G_opt), f_conv, f_opt, float(psi), s)


# ---------------------------------------------------------------------------
# Beamwidth
# ---------------------------------------------------------------------------

NULL_DEPTH_DB = 30.0


def zero_point_beamwidth(angles_deg, values, target_deg: float,
                         depth_db: float = NULL_DEPTH_DB) -> float:
    """Gap (degrees) between the first deep minima flanking the main lobe.

    ``values`` is a linear power cut sampled at ``angles_deg`` (ascending).
    Starting from the sample nearest ``target_deg`` the search climbs to the
    local peak, then walks outward on each side to the first local minimum
    at least ``depth_db`` below that peak.
    """
    ang = np.asarray(angles_deg, float)
    val = np.asarray(values, float)
    if ang.ndim != 1 or ang.shape != val.shape or ang.size < 3:
        raise DomainError("angles and values must be matching 1-D arrays")
    i = int(np.argmin(np.abs(ang - target_deg)))
    while True:
        if i > 0 and val[i - 1] > val[i]:
            i -= 1
        elif i < val.size - 1 and val[i + 1] > val[i]:
            i += 1
        else:
            break
    peak = val[i]
    level = peak * 10.0 ** (-depth_db / 10.0)

    def first_null(step):
        j = i + step
        while 0 < j < val.size - 1:
            if val[j] <= val[j - 1] and val[j] <= val[j + 1] and val[j] <= level:
                return j
            j += step
        return None

    left, right = first_null(-1), first_null(+1)
    if left is None or right is None:
        partial = {"peak_deg": float(ang[i])}
        if left is not None:
            partial["left_null_deg"] = float(ang[left])
        if right is not None:
            partial["right_null_deg"] = float(ang[right])
        raise MeasurementError(
            f"no minimum {depth_db:g} dB below the peak on both sides of {ang[i]:.3f} deg",
            partial,
        )
    return float(ang[right] - ang[left])


# ---------------------------------------------------------------------------
# Batched gains
# ---------------------------------------------------------------------------


def _eigen_coords(A: TransferMatrix, H: np.ndarray) -> np.ndarray:
    """Coordinates of ``H^H`` (rows are steering vectors) in the retained basis."""
    V = A.retained_basis
    Hc = H.conj().T
    if np.isrealobj(V):
        # two real products cost half of one promoted complex product
        return V.T @ Hc.real + 1j * (V.T @ Hc.imag)
    return V.conj().T @ Hc                                  # (k, M)


def batch_gains_multi(geom: ArrayGeometry, pattern: RadiationPattern, A: TransferMatrix,
                      units, design_sets, block: int = 2048):
    """Like :func:`batch_gains` for several design sets sharing one true set.

    ``design_sets`` is a sequence of unit-vector arrays shaped like
    ``units`` (``None`` entries mean "design toward the true direction").
    The true-direction projections are computed once per block.
    """
    units = np.asarray(units, float)
    flat_u = units.reshape(-1, 3)
    designs = [None if d is None else np.asarray(d, float).reshape(-1, 3) for d in design_sets]
    scale = A.inverse_sqrt_eigenvalues[:, None]
    out = [(np.empty(flat_u.shape[0]), np.empty(flat_u.shape[0])) for _ in designs]
    for s in range(0, flat_u.shape[0], block):
        H_true = steering_vectors(geom, pattern, flat_u[s:s + block])
        a = _eigen_coords(A, H_true)
        a_scaled = a.conj() * scale
        for design, (conv, opt) in zip(designs, out):
            if design is None:
                H_est, b = H_true, a
            else:
                H_est = steering_vectors(geom, pattern, design[s:s + block])
                b = _eigen_coords(A, H_est)
            # h_true A h_est^H and h_true A^2 h_est^H in eigen coordinates.
            cross1 = np.sum(a_scaled * b, axis=0)
            cross2 = np.sum(a_scaled * scale * b, axis=0)
            est_norm2 = np.sum(np.abs(H_est) ** 2, axis=1)
            opt_norm2 = np.sum(scale ** 2 * np.abs(b) ** 2, axis=0)
            with np.errstate(divide="ignore", invalid="ignore"):
                conv[s:s + block] = np.abs(cross1) ** 2 / est_norm2
                opt[s:s + block] = np.abs(cross2) ** 2 / opt_norm2
    shape = units.shape[:-1]
    return [(c.reshape(shape), o.reshape(shape)) for c, o in out]


def batch_gains(geom: ArrayGeometry, pattern: RadiationPattern, A: TransferMatrix,
                units, design_units=None, block: int = 2048):
    """Conventional and optimal gains for many targets at once.

    Beamformers are designed toward ``design_units`` (defaults to
    ``units``) and evaluated toward ``units``. Returns two arrays of linear
    gains with the leading shape of ``units``.
    """
    return batch_gains_multi(geom, pattern, A, units, [design_units], block)[0]
