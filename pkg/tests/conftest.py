import sys

import numpy as np
import pytest

from holosurf import spherical_quadrature


@pytest.fixture(scope="session")
def coarse_quad():
    """Cheaper rule for tests that only need a few digits."""
    return spherical_quadrature(96, 192)


def brute_coupling(pattern, delta, n_polar=400, n_azimuth=800):
    """Direct 2-D sum of R(u) exp(-2j pi u.delta) over an independent product grid.

    Midpoint rule in theta (not Gauss-Legendre) so it shares no code with the
    package quadrature.
    """
    theta = (np.arange(n_polar) + 0.5) * np.pi / n_polar
    phi = (np.arange(n_azimuth) + 0.5) * 2 * np.pi / n_azimuth - np.pi
    T, P = np.meshgrid(theta, phi, indexing="ij")
    u = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1)
    w = np.sin(T) * (np.pi / n_polar) * (2 * np.pi / n_azimuth)
    vals = pattern(u) * np.exp(-2j * np.pi * (u @ np.asarray(delta, float)))
    return np.sum(w * vals) / (4 * np.pi)


def inverse_sqrt_dense(C):
    """Reference C^{-1/2} through numpy's eigh, no thresholding."""
    lam, V = np.linalg.eigh(C)
    return (V / np.sqrt(lam)) @ V.conj().T


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
