import numpy as np
import pytest

from holosurf import (
    ENDFIRE,
    NORMAL,
    ArrayGeometry,
    ConfigurationError,
    Direction,
    DomainError,
    Layout,
    angles_to_units,
    build_ula,
    build_ura,
    direction_to_unit,
)


def test_ura_shape_and_ordering():
    g = build_ura(1.0, 0.25)
    assert g.n_elements == 16 and g.layout is Layout.URA_YZ
    p = g.positions
    assert np.all(p[:, 0] == 0)
    # first element: top-left (largest z, smallest y)
    np.testing.assert_allclose(p[0], [0, -0.375, 0.375])
    np.testing.assert_allclose(p[1], [0, -0.125, 0.375])
    np.testing.assert_allclose(p[4], [0, -0.375, 0.125])
    np.testing.assert_allclose(p.mean(axis=0), 0, atol=1e-15)


def test_ura_single_cell():
    g = build_ura(0.5, 0.5)
    np.testing.assert_array_equal(g.positions, [[0.0, 0.0, 0.0]])


@pytest.mark.parametrize("L, d", [(1.0, 0.3), (2.0, 0.7), (0.0, 0.1), (1.0, -0.5)])
def test_ura_rejects_bad_grid(L, d):
    with pytest.raises(ConfigurationError):
        build_ura(L, d)


def test_ura_float_division_tolerated():
    # 2 / 0.05 is 40.00000000000001 in floating point
    assert build_ura(2.0, 0.05).n_elements == 1600
    assert build_ura(1.0, 0.1).n_elements == 100


def test_ula_two_elements():
    g = build_ula(2, 0.3)
    np.testing.assert_allclose(g.positions, [[0, 0, 0.15], [0, 0, -0.15]])


def test_positions_read_only():
    g = build_ura(1.0, 0.5)
    with pytest.raises(ValueError):
        g.positions[0, 0] = 1.0


def test_duplicate_positions_rejected():
    with pytest.raises(ConfigurationError):
        ArrayGeometry(np.zeros((2, 3)))


def test_bad_shape_rejected():
    with pytest.raises(ConfigurationError):
        ArrayGeometry(np.zeros((3, 2)))
    with pytest.raises(ConfigurationError):
        ArrayGeometry([[0, 0, np.nan]])


def test_named_directions():
    np.testing.assert_allclose(direction_to_unit(NORMAL), [1, 0, 0], atol=1e-16)
    np.testing.assert_allclose(direction_to_unit(ENDFIRE), [0, 1, 0], atol=1e-16)
    np.testing.assert_allclose(Direction(0.0, 0.0).unit, [0, 0, 1])


def test_direction_validation():
    with pytest.raises(DomainError):
        Direction(-0.1, 0.0)
    with pytest.raises(DomainError):
        Direction(1.0, 4.0)
    assert Direction.from_degrees(90, 180).phi == pytest.approx(np.pi)


def test_angles_to_units_broadcast():
    u = angles_to_units(np.array([[0.1], [0.2]]), np.array([0.0, 1.0, 2.0]))
    assert u.shape == (2, 3, 3)
    np.testing.assert_allclose(np.linalg.norm(u, axis=-1), 1.0)


def test_translated_keeps_shape():
    g = build_ura(1.0, 0.5).translated([1.0, 2.0, 3.0])
    assert g.layout is Layout.ARBITRARY
    np.testing.assert_allclose(g.positions.mean(axis=0), [1, 2, 3])
