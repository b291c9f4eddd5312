"""Mutual coupling matrix and coupling transfer matrix.

Entry ``(m, n)`` of the coupling matrix is the pattern-weighted sphere
average of ``exp(-2j pi u . (t_m - t_n))``. For isotropic elements it has
the closed form ``sinc(2 |t_m - t_n|)``; other patterns go through the
spherical quadrature. The transfer matrix is the (eigenvalue-thresholded)
inverse square root of the coupling matrix.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.optimize import brentq
from scipy.spatial.distance import cdist

from .errors import InvariantError, NumericalError, SearchError
from .geometry import ArrayGeometry
from .radiation import RadiationPattern, SphericalQuadrature, default_quadrature

log = logging.getLogger(__name__)

DEFAULT_GAMMA = 1e-12
KEY_QUANTUM = 1e-12  # displacement cache resolution, wavelengths
HERMITIAN_TOL = 1e-10
NEGATIVE_EIG_TOL = 1e-10
REAL_TOL = 1e-13  # imaginary parts below this are quadrature rounding

_CHUNK_BYTES = 64 * 2**20
_DENSE_TABLE_LIMIT = 4_000_000


class CouplingMethod(str, enum.Enum):
    ANALYTIC_SINC = "ANALYTIC_SINC"
    QUADRATURE = "QUADRATURE"


# ---------------------------------------------------------------------------
# Single entries
# ---------------------------------------------------------------------------


def coupling_entry_iso(t_a, t_b) -> float:
    """``sinc(2 |t_a - t_b|)`` with ``sinc(x) = sin(pi x) / (pi x)``."""
    dist = float(np.linalg.norm(np.subtract(t_a, t_b, dtype=float)))
    return 1.0 if dist == 0.0 else float(np.sinc(2.0 * dist))


def coupling_entry_quadrature(pattern: RadiationPattern, t_a, t_b,
                              quad: Optional[SphericalQuadrature] = None) -> complex:
    delta = np.subtract(t_a, t_b, dtype=float).reshape(1, 3)
    return complex(coupling_entries(pattern, delta, quad)[0])


def coupling_entries(pattern: RadiationPattern, deltas,
                     quad: Optional[SphericalQuadrature] = None) -> np.ndarray:
    """Quadrature coupling values for an ``(D, 3)`` array of displacements.

    The polar and azimuthal sums are factored: the azimuthal transform is
    computed once per distinct ``(dx, dy)`` and the polar phase once per
    distinct ``dz``.
    """
    quad = quad or default_quadrature()
    deltas = np.atleast_2d(np.asarray(deltas, float))
    xy, xy_idx = np.unique(deltas[:, :2], axis=0, return_inverse=True)
    z, z_idx = np.unique(deltas[:, 2], return_inverse=True)
    az = _azimuthal_transform(pattern, xy, quad)          # (n_polar, P)
    pol = _polar_phase(z, quad)                           # (n_polar, Q)
    vals = np.einsum("ip,ip->p", az[:, xy_idx.ravel()], pol[:, z_idx.ravel()])
    return vals / (4.0 * np.pi)


def _azimuthal_transform(pattern, xy, quad) -> np.ndarray:
    """``B[i, p] = w_mu_i sum_k w_phi R(mu_i, phi_k) e^{-2j pi (u_x dx_p + u_y dy_p)}``."""
    wr = quad.weights * pattern(quad.units)                # (n_polar, n_azimuth)
    ux = quad.units[..., 0]
    uy = quad.units[..., 1]
    out = np.empty((quad.n_polar, len(xy)), dtype=complex)
    step = max(1, _CHUNK_BYTES // (16 * quad.n_nodes))
    for start in range(0, len(xy), step):
        block = xy[start:start + step]
        phase = ux[..., None] * block[:, 0] + uy[..., None] * block[:, 1]
        out[:, start:start + step] = np.einsum(
            "ik,ikp->ip", wr, np.exp(-2j * np.pi * phase)
        )
    return out


def _polar_phase(z, quad) -> np.ndarray:
    return np.exp(-2j * np.pi * np.outer(quad.mu, z))


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    entries: np.ndarray
    geometry: ArrayGeometry = field(repr=False)
    pattern: RadiationPattern = field(repr=False)
    method: CouplingMethod

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self):
        return (f"CouplingMatrix(N={self.n}, method={self.method.value}, "
                f"pattern={self.pattern.label})")


def _quantized(positions):
    return np.round(np.asarray(positions) / KEY_QUANTUM).astype(np.int64)


def _difference_table(keys):
    """Distinct pairwise differences of integer keys ``(U, k)``.

    Returns the distinct differences (as floats) and an index map
    ``M[a, b]`` into them for ``keys[a] - keys[b]``.
    """
    diff = keys[:, None, :] - keys[None, :, :]
    uniq, inv = np.unique(diff.reshape(-1, keys.shape[1]), axis=0, return_inverse=True)
    return uniq * KEY_QUANTUM, inv.reshape(len(keys), len(keys))


def coupling_matrix(geom: ArrayGeometry, pattern: RadiationPattern,
                    quad: Optional[SphericalQuadrature] = None) -> CouplingMatrix:
    """Assemble the ``N x N`` coupling matrix of ``geom``.

    Isotropic patterns use the closed-form sinc (real). Other patterns are
    integrated once per distinct displacement; when every imaginary part is
    rounding noise the matrix is returned as real symmetric.
    """
    pos = geom.positions
    if pattern.is_isotropic:
        entries = cdist(pos, pos)
        np.multiply(entries, 2.0, out=entries)
        entries = np.sinc(entries)
        np.fill_diagonal(entries, 1.0)
        return CouplingMatrix(entries, geom, pattern, CouplingMethod.ANALYTIC_SINC)

    quad = quad or default_quadrature()
    keys = _quantized(pos)
    xy_pts, ixy = np.unique(keys[:, :2], axis=0, return_inverse=True)
    z_pts, iz = np.unique(keys[:, 2:], axis=0, return_inverse=True)
    ixy, iz = ixy.ravel(), iz.ravel()
    dxy, mxy = _difference_table(xy_pts)
    dz, mz = _difference_table(z_pts)

    az = _azimuthal_transform(pattern, dxy, quad)
    pol = _polar_phase(dz[:, 0], quad)
    p_idx = mxy[ixy[:, None], ixy[None, :]]
    q_idx = mz[iz[:, None], iz[None, :]]
    if az.shape[1] * pol.shape[1] <= _DENSE_TABLE_LIMIT:
        table = (az.T @ pol) / (4.0 * np.pi)
        if np.max(np.abs(table.imag)) <= REAL_TOL:
            table = np.ascontiguousarray(table.real)
        entries = table[p_idx, q_idx]
    else:
        flat = p_idx * pol.shape[1] + q_idx
        uniq, inv = np.unique(flat, return_inverse=True)
        pu, qu = np.divmod(uniq, pol.shape[1])
        vals = np.einsum("ip,ip->p", az[:, pu], pol[:, qu]) / (4.0 * np.pi)
        if np.max(np.abs(vals.imag)) <= REAL_TOL:
            vals = vals.real
        entries = vals[inv.reshape(flat.shape)]
    return CouplingMatrix(entries, geom, pattern, CouplingMethod.QUADRATURE)


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Thresholded ``C^{-1/2}`` kept in factored form.

    ``eigenvalues`` are sorted in descending order and ``eigenvectors``
    holds the matching columns. Only modes with eigenvalue ``>= threshold``
    contribute; ``retained_count`` of them. The dense matrix is formed
    lazily by :attr:`entries`; :meth:`apply` works on the factors.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    threshold: float
    retained_count: int

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @cached_property
    def retained_basis(self) -> np.ndarray:
        return self.eigenvectors[:, : self.retained_count]

    @cached_property
    def inverse_sqrt_eigenvalues(self) -> np.ndarray:
        lam = self.eigenvalues[: self.retained_count]
        return 1.0 / np.sqrt(lam)

    @cached_property
    def entries(self) -> np.ndarray:
        vk = self.retained_basis
        return (vk * self.inverse_sqrt_eigenvalues) @ vk.conj().T

    def apply(self, x) -> np.ndarray:
        """``A @ x`` for a vector or a stack of column vectors."""
        vk = self.retained_basis
        coeff = vk.conj().T @ x
        scale = self.inverse_sqrt_eigenvalues
        coeff = coeff * (scale if coeff.ndim == 1 else scale[:, None])
        return vk @ coeff

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self):
        return (f"TransferMatrix(N={self.n}, retained={self.retained_count}, "
                f"threshold={self.threshold:g})")


def transfer_matrix(C, gamma: float = DEFAULT_GAMMA) -> TransferMatrix:
    """Eigenvalue-thresholded inverse square root of a coupling matrix.

    Eigen-pairs with ``lambda < gamma`` are discarded. Eigenvalues within
    ``-1e-10`` of zero are treated as zero; anything more negative means
    the input is not positive semidefinite and raises ``InvariantError``.
    """
    mat = np.asarray(C.entries if isinstance(C, CouplingMatrix) else C)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvariantError(f"coupling matrix must be square, got {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise InvariantError("coupling matrix has non-finite entries")
    asym = np.max(np.abs(mat - mat.conj().T)) if mat.shape[0] <= 2048 else _max_asym(mat)
    if asym > HERMITIAN_TOL:
        raise InvariantError(f"coupling matrix is not Hermitian (max deviation {asym:.3g})")
    if np.iscomplexobj(mat) and np.max(np.abs(mat.imag)) <= REAL_TOL:
        mat = mat.real
    try:
        lam, vec = scipy.linalg.eigh(mat, check_finite=False, driver="evd")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"Hermitian eigensolver failed: {exc}") from exc
    lam, vec = lam[::-1], vec[:, ::-1]
    if lam[-1] < -NEGATIVE_EIG_TOL:
        raise InvariantError(f"coupling matrix has eigenvalue {lam[-1]:.3g} < 0")
    lam = np.where(lam < 0.0, 0.0, lam)
    retained = int(np.count_nonzero(lam >= gamma))
    log.debug("transfer matrix: N=%d retained=%d gamma=%g", len(lam), retained, gamma)
    return TransferMatrix(lam, np.ascontiguousarray(vec), float(gamma), retained)


def _max_asym(mat, block=1024):
    worst = 0.0
    n = mat.shape[0]
    for i in range(0, n, block):
        for j in range(i, n, block):
            a = mat[i:i + block, j:j + block]
            b = mat[j:j + block, i:i + block].conj().T
            worst = max(worst, float(np.max(np.abs(a - b))))
    return worst


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

_AXES = {"X": 0, "Y": 1, "Z": 2}


def coupling_along_axis(pattern: RadiationPattern, axis: str, distances,
                        quad: Optional[SphericalQuadrature] = None) -> np.ndarray:
    """Coupling between an element at the origin and one at ``d * e_axis``."""
    distances = np.atleast_1d(np.asarray(distances, float))
    if pattern.is_isotropic:
        return np.sinc(2.0 * np.abs(distances)).astype(complex)
    deltas = np.zeros((distances.size, 3))
    deltas[:, _AXES[axis.upper()]] = distances
    return coupling_entries(pattern, deltas, quad)


def min_uncoupling_distance(pattern: RadiationPattern, axis: str = "Y",
                            quad: Optional[SphericalQuadrature] = None,
                            step: float = 0.01, max_distance: float = 2.0,
                            xtol: float = 1e-8) -> float:
    """Smallest spacing along ``axis`` at which two elements decouple.

    Scans ``Re c(d)`` on a ``step`` grid over ``(0, max_distance]`` and bisects
    the first sign change. Fails if ``c`` is not real along the axis.
    """
    axis = axis.upper()
    if axis not in _AXES:
        raise ValueError(f"axis must be one of X, Y, Z, got {axis!r}")
    grid = np.arange(1, int(round(max_distance / step)) + 1) * step
    vals = coupling_along_axis(pattern, axis, grid, quad)
    worst_imag = float(np.max(np.abs(vals.imag)))
    if worst_imag > 1e-6:
        raise SearchError(f"coupling along {axis} is not real (|Im c| up to {worst_imag:.2e})")
    re = vals.real
    prev_d, prev_v = 0.0, 1.0
    for d, v in zip(grid, re):
        if v == 0.0:
            return float(d)
        if prev_v * v < 0.0:
            def f(x):
                return float(coupling_along_axis(pattern, axis, [x], quad)[0].real)
            return float(brentq(f, prev_d, d, xtol=xtol))
        prev_d, prev_v = d, v
    raise SearchError(f"no zero of the coupling within (0, {max_distance}] along {axis}")
