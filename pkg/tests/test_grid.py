import numpy as np
import pytest

from pkirchhoff.errors import InvalidArgumentError
from pkirchhoff.grid import (build_grid, edge_differences, field_from_csv, field_to_csv,
                             integrate_weighted_power, p_flux, p_laplacian_weak,
                             seminorm_w1p, signed_power)

# hand-computed on L = 1, n = 3 (h = 1/4), u = (1, 2, 1)
U3 = np.array([1.0, 2.0, 1.0])


@pytest.fixture
def g3():
    return build_grid(1.0, 3)


def test_mesh_width_and_nodes(g3):
    assert g3.h == 0.25
    np.testing.assert_array_equal(g3.nodes, [0.25, 0.5, 0.75])
    np.testing.assert_array_equal(g3.all_nodes, [0, 0.25, 0.5, 0.75, 1.0])


@pytest.mark.parametrize("length,n", [(1.0, 1), (1.0, 0), (0.0, 8), (-1.0, 8),
                                       (np.inf, 8), (1.0, 2.5), (1.0, True)])
def test_build_grid_rejects(length, n):
    with pytest.raises(InvalidArgumentError):
        build_grid(length, n)


def test_edge_differences_include_boundary(g3):
    np.testing.assert_array_equal(edge_differences(g3, U3), [4, 4, -4, -4])


@pytest.mark.parametrize("p,expected", [(2.0, 4.0), (3.0, 4.0), (1.5, 4.0)])
def test_seminorm_frozen(g3, p, expected):
    # every edge has |d| = 4, so the seminorm is 4 for every p on (0, 1)
    assert seminorm_w1p(g3, U3, p) == pytest.approx(expected, rel=1e-15)


def test_seminorm_rejects_p_le_1(g3):
    with pytest.raises(InvalidArgumentError):
        seminorm_w1p(g3, U3, 1.0)


def test_integrate_weighted_power_frozen(g3):
    assert integrate_weighted_power(g3, np.ones(3), U3, 2.0) == 1.5
    assert integrate_weighted_power(g3, np.array([1.0, -1.0, 2.0]), U3, 1.0) == 0.25


def test_check_field_shape_and_finiteness(g3):
    with pytest.raises(InvalidArgumentError):
        g3.check_field(np.ones(4))
    with pytest.raises(InvalidArgumentError):
        g3.check_field([1.0, np.nan, 1.0])


def test_signed_power_zero_and_sign():
    out = signed_power(np.array([-2.0, 0.0, 2.0]), 1.5)
    np.testing.assert_allclose(out, [-np.sqrt(2), 0.0, np.sqrt(2)], rtol=1e-15)


def test_p_flux_p2_identity_and_p3():
    d = np.array([-3.0, 0.0, 2.0])
    np.testing.assert_array_equal(p_flux(d, 2.0), d)
    np.testing.assert_array_equal(p_flux(d, 3.0), [-9.0, 0.0, 4.0])


def test_p_laplacian_weak_p2_frozen(g3):
    np.testing.assert_array_equal(p_laplacian_weak(g3, U3, 2.0), [0.0, 8.0, 0.0])


def test_seminorm_sine_converges():
    # ||sin(pi x)||_2^2 = pi^2 / 2 on (0, 1)
    g = build_grid(1.0, 512)
    val = seminorm_w1p(g, np.sin(np.pi * g.nodes), 2.0) ** 2
    assert val == pytest.approx(np.pi**2 / 2, rel=1e-4)


def test_csv_round_trip_exact():
    g = build_grid(2.0, 17)
    u = np.random.default_rng(0).normal(size=17)
    g2, u2 = field_from_csv(field_to_csv(g, u))
    assert g2 == g
    np.testing.assert_array_equal(u2, u)


@pytest.mark.parametrize("text", ["", "a,b\n0,0\n", "x,value\n0,1\n0.5,1\n0.7,1\n1,0\n",
                                  "x,value\n0,0\n1,0\n"])
def test_csv_rejects_bad_input(text):
    with pytest.raises(InvalidArgumentError):
        field_from_csv(text)
