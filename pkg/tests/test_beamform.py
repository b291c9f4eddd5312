import numpy as np
import pytest

from holosurf import (
    ENDFIRE,
    NORMAL,
    DegenerateDirectionError,
    Direction,
    DomainError,
    MeasurementError,
    angles_to_units,
    batch_gains,
    build_ula,
    build_ura,
    conventional_bf,
    coupling_matrix,
    dipole_pattern,
    directional_pattern,
    gain,
    isotropic_pattern,
    optimal_bf,
    optimal_gain_bound,
    steering_vector,
    steering_vectors,
    surface_pattern,
    transfer_matrix,
    two_element_closed_form,
    zero_point_beamwidth,
)
from holosurf.beamform import BeamKind


def _setup(L=1.0, d=0.25, pattern=None):
    g = build_ura(L, d)
    p = pattern or isotropic_pattern()
    return g, p, transfer_matrix(coupling_matrix(g, p))


def test_steering_vector_phases():
    g = build_ura(1.0, 0.5)
    h = steering_vector(g, isotropic_pattern(), ENDFIRE)
    want = np.exp(2j * np.pi * g.positions[:, 1])
    np.testing.assert_allclose(h.entries, want)


def test_steering_vector_amplitude_follows_pattern():
    g = build_ura(1.0, 0.5)
    p = directional_pattern()
    h = steering_vector(g, p, NORMAL)
    np.testing.assert_allclose(np.abs(h.entries), np.sqrt(p.at(NORMAL)))


def test_dipole_null_at_zenith_is_degenerate():
    g = build_ura(1.0, 0.5)
    h = steering_vector(g, dipole_pattern(0.5), Direction(0.0, 0.0))
    with pytest.raises(DegenerateDirectionError):
        conventional_bf(h)


def test_conventional_and_optimal_power():
    g, p, T = _setup()
    h = steering_vector(g, p, NORMAL)
    for f in (conventional_bf(h, 2.5), optimal_bf(h, T, 2.5)):
        assert np.vdot(f.entries, f.entries).real == pytest.approx(2.5)
    assert conventional_bf(h).kind is BeamKind.CONVENTIONAL


def test_gain_formula_and_bound():
    g, p, T = _setup(pattern=dipole_pattern(0.25))
    h = steering_vector(g, p, Direction(1.2, 0.4))
    g_conv = gain(h, T, conventional_bf(h)).gain_linear
    g_opt = gain(h, T, optimal_bf(h, T)).gain_linear
    assert g_opt == pytest.approx(optimal_gain_bound(h, T), rel=1e-12)
    assert g_conv <= g_opt * (1 + 1e-12)
    f = conventional_bf(h).entries
    ref = abs(h.entries @ T.entries @ f) ** 2 / np.vdot(f, f).real
    assert g_conv == pytest.approx(ref, rel=1e-12)


def test_gain_with_dense_or_no_transfer():
    g, p, T = _setup()
    h = steering_vector(g, p, NORMAL)
    f = conventional_bf(h)
    assert gain(h, T.entries, f).gain_linear == pytest.approx(gain(h, T, f).gain_linear)
    # without coupling the matched filter gives ||h||^2 = N
    assert gain(h, None, f).gain_linear == pytest.approx(g.n_elements)


def test_gain_rejects_bad_inputs():
    g, p, T = _setup()
    h = steering_vector(g, p, NORMAL)
    with pytest.raises(DomainError):
        gain(h, T, np.zeros(16))
    with pytest.raises(DomainError):
        gain(h, T, np.ones(4))


def test_optimal_bf_degenerate_when_h_in_null_space():
    g = build_ula(2, 0.5)
    h = steering_vector(g, isotropic_pattern(), Direction(np.pi / 2, 0))
    V = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    A = V[:, 1:] @ V[:, 1:].T   # keeps only the antisymmetric mode
    with pytest.raises(DegenerateDirectionError):
        optimal_bf(h, A)


def test_surface_pattern_equals_gain_at_target():
    g, p, T = _setup(pattern=directional_pattern())
    h = steering_vector(g, p, NORMAL)
    f = optimal_bf(h, T)
    assert surface_pattern(g, p, T, f, NORMAL) == pytest.approx(gain(h, T, f).gain_linear)


@pytest.mark.parametrize("d, theta", [(0.1, 0.3), (0.25, np.pi / 2), (0.37, 2.0), (1.7, 0.9)])
def test_two_element_closed_form_matches_pipeline(d, theta):
    g = build_ula(2, d)
    p = isotropic_pattern()
    T = transfer_matrix(coupling_matrix(g, p))
    h = steering_vector(g, p, Direction(theta, 0.3))
    res = two_element_closed_form(d, theta)
    assert gain(h, T, conventional_bf(h)).gain_linear == pytest.approx(res.G_conv, rel=1e-10)
    assert gain(h, T, optimal_bf(h, T)).gain_linear == pytest.approx(res.G_opt, rel=1e-10)
    # beamformers agree up to a global phase
    fo = optimal_bf(h, T).entries
    assert abs(np.vdot(res.f_opt, fo)) == pytest.approx(1.0, abs=1e-10)
    fc = conventional_bf(h).entries
    assert abs(np.vdot(res.f_conv, fc)) == pytest.approx(1.0, abs=1e-12)


def test_two_element_series_branch_is_smooth():
    a = two_element_closed_form(1e-5, 0.7).G_opt
    b = two_element_closed_form(1.0001e-5, 0.7).G_opt
    assert a == pytest.approx(b, rel=1e-3)


def test_beamwidth_of_sinc_squared():
    ang = np.linspace(-90, 90, 18001)
    vals = np.sinc(ang / 10.0) ** 2 + 1e-12
    assert zero_point_beamwidth(ang, vals, 0.0) == pytest.approx(20.0, abs=0.02)


def test_beamwidth_skips_shallow_minima():
    ang = np.linspace(-60, 60, 1201)
    vals = np.cos(np.deg2rad(ang)) ** 2 * (1.2 + np.cos(np.deg2rad(6 * ang))) + 1e-9
    vals[np.abs(ang) >= 45] = np.sinc((np.abs(ang[np.abs(ang) >= 45]) - 45) / 5) ** 2 * vals[
        np.argmin(np.abs(ang - 45))]
    # minima at +-30 are only a few dB deep and must be skipped
    w = zero_point_beamwidth(ang, vals, 0.0)
    assert w > 60


def test_beamwidth_reports_partial_on_failure():
    ang = np.linspace(-10, 10, 201)
    with pytest.raises(MeasurementError) as info:
        zero_point_beamwidth(ang, np.exp(-ang ** 2 / 50), 0.0)
    assert info.value.partial["peak_deg"] == pytest.approx(0.0)


def test_batch_gains_match_single():
    g, p, T = _setup(pattern=dipole_pattern(0.25))
    units = angles_to_units(np.array([1.0, 1.4, 2.2]), np.array([-0.5, 0.1, 0.9]))
    design = angles_to_units(np.array([1.05, 1.4, 2.1]), np.array([-0.45, 0.1, 1.0]))
    conv, opt = batch_gains(g, p, T, units, design_units=design, block=2)
    for i in range(3):
        h_true = steering_vectors(g, p, units[i])
        h_est = steering_vectors(g, p, design[i])
        fc = conventional_bf(h_est)
        fo = optimal_bf(h_est, T)
        assert conv[i] == pytest.approx(abs(h_true @ T.apply(fc.entries)) ** 2, rel=1e-10)
        assert opt[i] == pytest.approx(abs(h_true @ T.apply(fo.entries)) ** 2, rel=1e-10)
