"""Experiment runners. Each takes a :class:`SweepConfig` and returns a table.

Gains are reported in dB computed from linear values. Every runner is
deterministic for a fixed configuration (and seed, for the Monte Carlo).
"""

from __future__ import annotations

import logging
import time
import warnings
from typing import Dict, Tuple

import numpy as np

from ..beamform import (
    batch_gains,
    batch_gains_multi,
    conventional_bf,
    optimal_bf,
    steering_vector,
    surface_pattern_units,
    zero_point_beamwidth,
)
from ..coupling import (
    coupling_along_axis,
    coupling_entries,
    coupling_matrix,
    min_uncoupling_distance,
    transfer_matrix,
)
from ..errors import ConfigurationError, MeasurementError, SearchError
from ..geometry import ENDFIRE, NORMAL, angles_to_units, build_ura
from ..radiation import PatternKind, make_pattern, spherical_quadrature
from .config import Experiment, SweepConfig, emit_config
from .table import ResultTable

log = logging.getLogger(__name__)

LARGE_N_WARNING = 10_000
TARGET_DIRECTIONS = {"normal": NORMAL, "endfire": ENDFIRE}


def _db(x):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)


def _quad(cfg):
    return spherical_quadrature(cfg.quad_polar, cfg.quad_azimuth)


def _pattern(cfg: SweepConfig, kind: str, d: float):
    length = None
    if PatternKind(kind) is PatternKind.DIPOLE_Z:
        length = cfg.dipole_length if cfg.dipole_length is not None else d
    return make_pattern(kind, length)


def _surface(cfg: SweepConfig, kind: str, L: float, d: float):
    """Geometry, pattern and transfer matrix for one URA configuration."""
    geom = build_ura(L, d)
    if geom.n_elements > LARGE_N_WARNING:
        warnings.warn(f"URA with N={geom.n_elements} elements; the eigensolve will be slow",
                      RuntimeWarning, stacklevel=3)
    pattern = _pattern(cfg, kind, d)
    C = coupling_matrix(geom, pattern, _quad(cfg))
    T = transfer_matrix(C, cfg.gamma)
    log.info("%s L=%g d=%g N=%d retained=%d", kind, L, d, geom.n_elements, T.retained_count)
    return geom, pattern, T


def _table(columns, cfg, started, **meta) -> ResultTable:
    table = ResultTable(list(columns))
    table.metadata["experiment"] = cfg.experiment.value
    table.metadata.update(meta)
    table.metadata["config"] = emit_config(cfg)
    table.metadata["wall_time_s"] = 0.0
    return table


def _finish(table, started):
    table.metadata["wall_time_s"] = round(time.perf_counter() - started, 3)
    return table


def _require(cfg, experiment):
    if cfg.experiment is not experiment:
        raise ConfigurationError(f"expected a {experiment.value} config, got {cfg.experiment.value}")


# ---------------------------------------------------------------------------


def run_coupling_sweep(cfg: SweepConfig) -> ResultTable:
    """Coupling between an element at the origin and a displaced one.

    ``axis = Y | Z`` gives columns ``pattern, distance, re_c, im_c``;
    ``axis = YZ`` sweeps the y-z plane with columns
    ``pattern, t_y, t_z, re_c, im_c``.
    """
    _require(cfg, Experiment.COUPLING_SWEEP)
    started = time.perf_counter()
    quad = _quad(cfg)
    if any(PatternKind(k) is PatternKind.DIPOLE_Z for k in cfg.pattern) and cfg.dipole_length is None:
        raise ConfigurationError("coupling sweep with a dipole needs dipole_length")
    n_steps = int(round(cfg.max_distance / cfg.step))
    if cfg.axis in ("Y", "Z"):
        table = _table(["pattern", "distance", "re_c", "im_c"], cfg, started)
        dist = np.round(np.arange(n_steps + 1) * cfg.step, 12)
        for kind in cfg.pattern:
            pattern = _pattern(cfg, kind, cfg.dipole_length)
            vals = coupling_along_axis(pattern, cfg.axis, dist, quad)
            for x, c in zip(dist, vals):
                table.append((pattern.label, float(x), float(c.real), float(c.imag)))
            try:
                zero = min_uncoupling_distance(pattern, cfg.axis, quad,
                                               max_distance=cfg.max_distance)
            except SearchError:
                zero = float("nan")
            table.metadata[f"first_zero[{pattern.label}]"] = zero
        return _finish(table, started)

    table = _table(["pattern", "t_y", "t_z", "re_c", "im_c"], cfg, started)
    axis = np.round(np.arange(-n_steps, n_steps + 1) * cfg.step, 12)
    tz, ty = np.meshgrid(axis, axis, indexing="ij")
    deltas = np.column_stack([np.zeros(ty.size), ty.ravel(), tz.ravel()])
    for kind in cfg.pattern:
        pattern = _pattern(cfg, kind, cfg.dipole_length)
        if pattern.is_isotropic:
            vals = np.sinc(2.0 * np.linalg.norm(deltas, axis=1)).astype(complex)
        else:
            vals = coupling_entries(pattern, deltas, quad)
        for (_, y, z), c in zip(deltas, vals):
            table.append((pattern.label, float(y), float(z), float(c.real), float(c.imag)))
    return _finish(table, started)


def run_gain_vs_spacing(cfg: SweepConfig) -> ResultTable:
    """Gains at fixed aperture versus grid pitch.

    Columns: ``pattern, target, L, d, N, G_conv_dB, G_opt_dB, retained_count``.
    """
    _require(cfg, Experiment.GAIN_VS_SPACING)
    started = time.perf_counter()
    table = _table(["pattern", "target", "L", "d", "N", "G_conv_dB", "G_opt_dB",
                    "retained_count"], cfg, started)
    L = cfg.L[0]
    for kind in cfg.pattern:
        for d in sorted(cfg.d, reverse=True):
            geom, pattern, T = _surface(cfg, kind, L, d)
            for target in cfg.target:
                h = steering_vector(geom, pattern, TARGET_DIRECTIONS[target])
                g_conv = abs(h.entries @ T.apply(conventional_bf(h).entries)) ** 2
                g_opt = abs(h.entries @ T.apply(optimal_bf(h, T).entries)) ** 2
                table.append((kind, target, L, d, geom.n_elements, float(_db(g_conv)),
                              float(_db(g_opt)), T.retained_count))
    return _finish(table, started)


def _sweep_units(cfg):
    n = int(round(180.0 / cfg.angle_step))
    if cfg.sweep == "horizontal":
        angles = np.linspace(-180.0, 180.0, 2 * n + 1)
        return angles, angles_to_units(np.pi / 2, np.deg2rad(angles))
    angles = np.linspace(0.0, 180.0, n + 1)
    return angles, angles_to_units(np.deg2rad(angles), 0.0)


def run_gain_vs_direction(cfg: SweepConfig) -> ResultTable:
    """Conventional/optimal gains along a horizontal or vertical sweep.

    Horizontal sweeps vary ``phi`` at ``theta = 90``; vertical sweeps vary
    ``theta`` at ``phi = 0``. Columns: ``pattern, angle_deg`` then
    ``G_conv_dB@d`` and ``G_opt_dB@d`` for every spacing.
    """
    _require(cfg, Experiment.GAIN_VS_DIRECTION)
    started = time.perf_counter()
    spacings = sorted(cfg.d, reverse=True)
    cols = ["pattern", "angle_deg"]
    for d in spacings:
        cols += [f"G_conv_dB@{d:g}", f"G_opt_dB@{d:g}"]
    table = _table(cols, cfg, started, sweep=cfg.sweep)
    angles, units = _sweep_units(cfg)
    L = cfg.L[0]
    for kind in cfg.pattern:
        per_d = []
        for d in spacings:
            geom, pattern, T = _surface(cfg, kind, L, d)
            per_d.append(batch_gains(geom, pattern, T, units))
        for i, a in enumerate(angles):
            row = [kind, float(a)]
            for conv, opt in per_d:
                row += [float(_db(conv[i])), float(_db(opt[i]))]
            table.append(row)
    return _finish(table, started)


def run_pattern_cut(cfg: SweepConfig) -> ResultTable:
    """Horizontal (x-y plane) cuts of the surface pattern, in dB.

    One column per ``pattern|target|d|method``; after the sampled rows come
    summary rows labelled ``zero_point_beamwidth_deg`` (NaN where no deep
    null was found).
    """
    _require(cfg, Experiment.PATTERN_CUT)
    started = time.perf_counter()
    n = int(round(180.0 / cfg.cut_step))
    phi = np.linspace(-180.0, 180.0, 2 * n + 1)
    units = angles_to_units(np.pi / 2, np.deg2rad(phi))
    L = cfg.L[0]
    columns, cuts, widths = [], [], []
    for kind in cfg.pattern:
        for d in sorted(cfg.d, reverse=True):
            geom, pattern, T = _surface(cfg, kind, L, d)
            for target in cfg.target:
                direction = TARGET_DIRECTIONS[target]
                h = steering_vector(geom, pattern, direction)
                for method, f in (("conv", conventional_bf(h)), ("opt", optimal_bf(h, T))):
                    cut = surface_pattern_units(geom, pattern, T, f, units)
                    try:
                        width = zero_point_beamwidth(phi, cut, np.rad2deg(direction.phi))
                    except MeasurementError:
                        width = float("nan")
                    columns.append(f"{kind}|{target}|d={d:g}|{method}")
                    cuts.append(_db(cut))
                    widths.append(width)
    table = _table(["phi_deg"] + columns, cfg, started)
    stacked = np.column_stack(cuts)
    for i, p in enumerate(phi):
        table.append([float(p)] + [float(v) for v in stacked[i]])
    table.append(["zero_point_beamwidth_deg"] + [float(w) for w in widths])
    return _finish(table, started)


def run_gain_vs_aperture(cfg: SweepConfig) -> ResultTable:
    """Optimal gains versus aperture side for a coarse and a dense pitch.

    ``d`` must list exactly two spacings. Columns:
    ``L, target, pattern, G_opt_dB@coarse, G_opt_dB@dense, delta_dB``.
    """
    _require(cfg, Experiment.GAIN_VS_APERTURE)
    if len(cfg.d) != 2:
        raise ConfigurationError("aperture sweep needs exactly two spacings (coarse, dense)")
    started = time.perf_counter()
    coarse, dense = sorted(cfg.d, reverse=True)
    table = _table(["L", "target", "pattern", f"G_opt_dB@{coarse:g}", f"G_opt_dB@{dense:g}",
                    "delta_dB"], cfg, started)
    results: Dict[Tuple, float] = {}
    for L in sorted(cfg.L):
        for kind in cfg.pattern:
            for d in (coarse, dense):
                geom, pattern, T = _surface(cfg, kind, L, d)
                for target in cfg.target:
                    h = steering_vector(geom, pattern, TARGET_DIRECTIONS[target])
                    results[(L, target, kind, d)] = float(np.linalg.norm(T.apply(h.entries.conj())) ** 2)
                del geom, T
    for L in sorted(cfg.L):
        for target in cfg.target:
            for kind in cfg.pattern:
                g1 = _db(results[(L, target, kind, coarse)])
                g2 = _db(results[(L, target, kind, dense)])
                table.append((L, target, kind, float(g1), float(g2), float(g2 - g1)))
    return _finish(table, started)


def mc_draws(seed: int, trials: int):
    """True directions and unit-variance angle errors for the Monte Carlo.

    Returns ``(theta, phi, z_theta, z_phi)``; the error at ``sigma`` degrees
    is ``sigma * z``. One counter-based stream per seed.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    theta = rng.uniform(np.pi / 3, 2 * np.pi / 3, trials)
    phi = rng.uniform(-np.pi / 3, np.pi / 3, trials)
    z = rng.standard_normal((2, trials))
    return theta, phi, z[0], z[1]


def run_csi_error_mc(cfg: SweepConfig) -> ResultTable:
    """Average gains when beams are steered with Gaussian angle errors.

    Targets are uniform over ``theta in [60, 120]``, ``phi in [-60, 60]``
    degrees. Columns: ``pattern, sigma_deg`` then ``G_conv_dB@d`` and
    ``G_opt_dB@d`` (dB of the linear mean) for every spacing.
    """
    _require(cfg, Experiment.CSI_ERROR_MC)
    started = time.perf_counter()
    spacings = sorted(cfg.d, reverse=True)
    cols = ["pattern", "sigma_deg"]
    for d in spacings:
        cols += [f"G_conv_dB@{d:g}", f"G_opt_dB@{d:g}"]
    table = _table(cols, cfg, started, averaging="linear", draws="shared across sigma and configuration")
    theta, phi, z_t, z_p = mc_draws(cfg.seed, cfg.trials)
    true_units = angles_to_units(theta, phi)
    L = cfg.L[0]
    for kind in cfg.pattern:
        means = {}
        for d in spacings:
            geom, pattern, T = _surface(cfg, kind, L, d)
            designs = [None if sigma == 0 else
                       angles_to_units(theta + np.deg2rad(sigma) * z_t,
                                       phi + np.deg2rad(sigma) * z_p)
                       for sigma in cfg.sigma]
            gains = batch_gains_multi(geom, pattern, T, true_units, designs)
            for sigma, (conv, opt) in zip(cfg.sigma, gains):
                means[(d, sigma)] = (conv.mean(), opt.mean())
            del geom, T
        for sigma in cfg.sigma:
            row = [kind, sigma]
            for d in spacings:
                row += [float(_db(means[(d, sigma)][0])), float(_db(means[(d, sigma)][1]))]
            table.append(row)
    return _finish(table, started)


RUNNERS = {
    Experiment.COUPLING_SWEEP: run_coupling_sweep,
    Experiment.GAIN_VS_SPACING: run_gain_vs_spacing,
    Experiment.GAIN_VS_DIRECTION: run_gain_vs_direction,
    Experiment.PATTERN_CUT: run_pattern_cut,
    Experiment.GAIN_VS_APERTURE: run_gain_vs_aperture,
    Experiment.CSI_ERROR_MC: run_csi_error_mc,
}


def run(cfg: SweepConfig) -> ResultTable:
    return RUNNERS[cfg.experiment](cfg)
