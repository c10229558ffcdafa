import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from rispl.geometry import (
    CellIndex,
    GeometryError,
    Point3,
    SphericalPlacement,
    antenna_offboresight_angle,
    cell_center,
    cell_coordinates,
    cell_distance,
    cell_distances,
    cell_to_terminal_angles,
    mirror_image,
    placement_to_point,
    point_to_placement,
    virtual_transmitter,
)
from rispl.ris import RisConfig

finite = st.floats(-50, 50, allow_nan=False)
points = st.tuples(finite, finite, finite)


@pytest.fixture
def grid2():
    return RisConfig(2, 2, 0.01, 0.01, wavelength=0.05)


def test_cell_center_smallest_grid(grid2):
    assert cell_center(grid2, CellIndex(1, 1)) == pytest.approx((0.005, 0.005, 0.0))
    assert cell_center(grid2, CellIndex(0, 0)) == pytest.approx((-0.005, -0.005, 0.0))


def test_cell_center_large_grid(large1):
    assert cell_center(large1, CellIndex(50, 51)) == pytest.approx((0.505, 0.495, 0.0))


@pytest.mark.parametrize("idx", [CellIndex(2, 1), CellIndex(-1, 0), CellIndex(1, 2)])
def test_cell_center_out_of_range(grid2, idx):
    with pytest.raises(GeometryError, match="outside"):
        cell_center(grid2, idx)


def test_cell_coordinates_symmetric(large1):
    xs, ys = cell_coordinates(large1)
    assert xs.shape == (102,) and ys.shape == (100,)
    assert_allclose(xs, -xs[::-1], atol=1e-15)
    assert xs[0] == pytest.approx(-0.505) and ys[-1] == pytest.approx(0.495)


@pytest.mark.parametrize("placement, expected", [
    ((1, 0, 0), (0, 0, 1)),
    ((1, math.pi / 2, 0), (1, 0, 0)),
    ((2, math.pi / 4, math.pi), (-math.sqrt(2), 0, math.sqrt(2))),
])
def test_placement_to_point(placement, expected):
    assert_allclose(placement_to_point(SphericalPlacement(*placement)), expected, atol=1e-15)


@given(st.floats(1e-3, 1e4), st.floats(1e-3, math.pi / 2), st.floats(0, 2 * math.pi - 1e-9))
def test_round_trip(d, theta, phi):
    back = point_to_placement(placement_to_point(SphericalPlacement(d, theta, phi)))
    assert back.distance == pytest.approx(d, rel=1e-12)
    assert back.theta == pytest.approx(theta, rel=1e-12, abs=1e-15)
    # azimuth is periodic; compare on the circle
    assert abs(math.remainder(back.phi - phi, 2 * math.pi)) < 1e-9


@given(st.floats(1e-3, 1e4), st.floats(1e-6, math.pi / 2), st.floats(0, 2 * math.pi - 1e-9))
def test_point_round_trip(d, theta, phi):
    p = placement_to_point(SphericalPlacement(d, theta, phi))
    assert_allclose(placement_to_point(point_to_placement(p)), p, rtol=1e-12, atol=d * 1e-15)


def test_placement_validation():
    with pytest.raises(GeometryError):
        SphericalPlacement(0.0, 0.1)
    with pytest.raises(GeometryError):
        SphericalPlacement(1.0, 2.0)
    assert SphericalPlacement(1.0, 0.1, -math.pi / 2).phi == pytest.approx(1.5 * math.pi)


def test_cell_distance_examples(large1):
    assert cell_distance((0, 0, 1), (0, 0, 0)) == 1.0
    assert cell_distance((3, 4, 0), (0, 0, 0)) == 5.0
    tx = SphericalPlacement(100, math.pi / 4, math.pi).to_point()
    r = cell_distance(tx, cell_center(large1, CellIndex(50, 51)))
    assert 100 - large1.diagonal <= r <= 100 + large1.diagonal


@given(points, points, points)
def test_triangle_inequality(a, b, c):
    assert cell_distance(a, c) <= cell_distance(a, b) + cell_distance(b, c) + 1e-9


@given(points)
def test_distance_symmetric(a):
    assert cell_distance(a, (1.0, 2.0, 3.0)) == cell_distance((1.0, 2.0, 3.0), a)


def test_far_distance_linearisation(large1):
    d = 1e4 * large1.diagonal
    th, ph = 0.7, 2.1
    tx = SphericalPlacement(d, th, ph).to_point()
    xs, ys = cell_coordinates(large1)
    exact = cell_distances(large1, tx)
    lin = d - math.sin(th) * (math.cos(ph) * xs[np.newaxis, :] + math.sin(ph) * ys[:, np.newaxis])
    assert np.max(np.abs(exact - lin)) < d * 1e-6


def test_cell_to_terminal_angles():
    assert cell_to_terminal_angles((0, 0, 0), (0, 0, 5)) == (0.0, 0.0)
    th, ph = cell_to_terminal_angles((0, 0, 0), (1, 0, 1))
    assert th == pytest.approx(math.pi / 4) and ph == 0.0
    cell = (0.005, 0.005, 0.0)
    term = SphericalPlacement(2, math.pi / 4, math.pi).to_point()
    v = np.subtract(term, cell)
    th, ph = cell_to_terminal_angles(cell, term)
    assert th == pytest.approx(math.acos(v[2] / np.linalg.norm(v)))
    assert ph == pytest.approx(math.atan2(v[1], v[0]) % (2 * math.pi))


def test_cell_to_terminal_angles_rejects_back_side():
    with pytest.raises(GeometryError):
        cell_to_terminal_angles((0, 0, 0), (1, 0, -1))


def test_offboresight_angle():
    assert antenna_offboresight_angle((0, 0, 1), (0, 0, 0), (0, 0, 0)) == 0.0
    assert antenna_offboresight_angle((0, 0, 3), (0, 0, 1), (0, 0, 2)) == 0.0
    assert antenna_offboresight_angle((0, 0, 1), (0, 0, 0), (1, 0, 0)) == pytest.approx(math.pi / 4)
    with pytest.raises(GeometryError):
        antenna_offboresight_angle((0, 0, 1), (0, 0, 1), (1, 0, 0))


def test_mirror_image():
    assert mirror_image((0, 0, 1)) == Point3(0, 0, -1)
    assert mirror_image((-1.414, 0, 1.414)) == Point3(-1.414, 0, -1.414)


@given(points)
def test_mirror_involution_and_plane_distances(p):
    assert mirror_image(mirror_image(p)) == Point3(*p)
    q = (0.3, -0.2, 0.0)
    assert cell_distance(mirror_image(p), q) == pytest.approx(cell_distance(p, q), rel=1e-12)


def test_virtual_transmitter():
    assert_allclose(virtual_transmitter(1, 0, 0), (0, 0, 1), atol=1e-15)
    assert_allclose(virtual_transmitter(2, math.pi / 4, math.pi / 4), (-1, -1, math.sqrt(2)), atol=1e-12)
    assert_allclose(virtual_transmitter(1, math.pi / 2, 0), (-1, 0, 0), atol=1e-15)
    with pytest.raises(GeometryError):
        virtual_transmitter(-1, 0, 0)


@settings(max_examples=25)
@given(st.floats(0.1, 10), st.floats(0, 1.5), st.floats(0, 6.28))
def test_cell_distances_match_scalar(d, th, ph):
    cfg = RisConfig(4, 6, 0.01, 0.012, wavelength=0.05)
    t = SphericalPlacement(d, th, ph).to_point()
    grid = cell_distances(cfg, t)
    for i, n in enumerate(range(-1, 3)):
        for j, m in enumerate(range(-2, 4)):
            assert grid[i, j] == pytest.approx(cell_distance(t, cell_center(cfg, CellIndex(n, m))), rel=1e-14)
