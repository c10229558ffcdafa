"""Placement of terminals and unit cells around a RIS lying in the z = 0 plane.

The RIS is centred on the origin with its reflecting side facing +z. Elevation
angles are measured from +z, azimuth from +x towards +y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * math.pi


class GeometryError(ValueError):
    """Raised for degenerate or out-of-range geometry."""


class Point3(NamedTuple):
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


ORIGIN = Point3(0.0, 0.0, 0.0)


def _point(p) -> Point3:
    if isinstance(p, Point3):
        q = p
    else:
        q = Point3(*(float(v) for v in p))
    if not all(math.isfinite(v) for v in q):
        raise GeometryError(f"non-finite point {q}")
    return q


@dataclass(frozen=True)
class SphericalPlacement:
    """Terminal position relative to the RIS centre.

    Attributes:
        distance: range to the RIS centre in meters (> 0).
        theta: elevation from the RIS normal in radians, within [0, pi/2].
        phi: azimuth in radians; stored wrapped to [0, 2*pi).
    """

    distance: float
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (self.distance > 0 and math.isfinite(self.distance)):
            raise GeometryError(f"distance must be positive, got {self.distance}")
        if not (0.0 <= self.theta <= math.pi / 2 + 1e-12):
            raise GeometryError(f"theta must lie in [0, pi/2], got {self.theta}")
        if not math.isfinite(self.phi):
            raise GeometryError("phi must be finite")
        object.__setattr__(self, "phi", wrap_angle(self.phi))

    @classmethod
    def from_degrees(cls, distance: float, theta_deg: float, phi_deg: float = 0.0):
        return cls(distance, math.radians(theta_deg), math.radians(phi_deg))

    def to_point(self) -> Point3:
        return placement_to_point(self)


@dataclass(frozen=True)
class CellIndex:
    n: int
    m: int


def wrap_angle(a: float) -> float:
    """Wrap an angle to [0, 2*pi)."""
    r = math.fmod(a, TWO_PI)
    if r < 0:
        r += TWO_PI
    # fmod of a tiny negative can round back up to exactly 2*pi
    if r >= TWO_PI:
        r = 0.0
    return r


def row_indices(n_rows: int) -> np.ndarray:
    """Row indices n = 1 - N/2, ..., N/2."""
    return np.arange(1 - n_rows // 2, n_rows // 2 + 1)


def col_indices(n_cols: int) -> np.ndarray:
    """Column indices m = 1 - M/2, ..., M/2."""
    return np.arange(1 - n_cols // 2, n_cols // 2 + 1)


def cell_center(cfg, idx: CellIndex) -> Point3:
    """Centre of cell U_{n,m}: ((m - 1/2) d_x, (n - 1/2) d_y, 0)."""
    n_lo, n_hi = 1 - cfg.rows // 2, cfg.rows // 2
    m_lo, m_hi = 1 - cfg.cols // 2, cfg.cols // 2
    if not (n_lo <= idx.n <= n_hi and m_lo <= idx.m <= m_hi):
        raise GeometryError(
            f"cell index (n={idx.n}, m={idx.m}) outside "
            f"n in [{n_lo}, {n_hi}], m in [{m_lo}, {m_hi}]"
        )
    return Point3((idx.m - 0.5) * cfg.dx, (idx.n - 0.5) * cfg.dy, 0.0)


def cell_coordinates(cfg) -> tuple[np.ndarray, np.ndarray]:
    """x positions of the M columns and y positions of the N rows, ascending."""
    xs = (col_indices(cfg.cols) - 0.5) * cfg.dx
    ys = (row_indices(cfg.rows) - 0.5) * cfg.dy
    return xs, ys


def placement_to_point(p: SphericalPlacement) -> Point3:
    st = math.sin(p.theta)
    return Point3(
        p.distance * st * math.cos(p.phi),
        p.distance * st * math.sin(p.phi),
        p.distance * math.cos(p.theta),
    )


def point_to_placement(p) -> SphericalPlacement:
    """Inverse of :func:`placement_to_point` for points with z >= 0."""
    p = _point(p)
    d = math.sqrt(p.x * p.x + p.y * p.y + p.z * p.z)
    if d == 0:
        raise GeometryError("point coincides with the RIS centre")
    if p.z < 0:
        raise GeometryError("point lies behind the RIS plane")
    theta, phi = _angles_from_displacement(p.x, p.y, p.z, d)
    return SphericalPlacement(d, theta, phi)


def _angles_from_displacement(dx: float, dy: float, dz: float, r: float):
    # atan2 keeps full precision near the normal, where acos(dz / r) does not
    theta = math.atan2(math.hypot(dx, dy), dz)
    if dx == 0.0 and dy == 0.0:
        phi = 0.0
    else:
        phi = wrap_angle(math.atan2(dy, dx))
    return theta, phi


def cell_distance(terminal, cell) -> float:
    a, b = _point(terminal), _point(cell)
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)


def cell_to_terminal_angles(cell, terminal) -> tuple[float, float]:
    """Elevation (from +z) and azimuth of the terminal as seen from a cell."""
    c, t = _point(cell), _point(terminal)
    if t.z <= 0:
        raise GeometryError("terminal must be on the reflecting side (z > 0)")
    dx, dy, dz = t.x - c.x, t.y - c.y, t.z - c.z
    r = math.sqrt(dx * dx + dy * dy + dz * dz)
    if r == 0:
        raise GeometryError("terminal coincides with cell")
    return _angles_from_displacement(dx, dy, dz, r)


def antenna_offboresight_angle(antenna_pos, boresight_target, cell) -> float:
    """Angle between the antenna's boresight and the direction to ``cell``."""
    a = _point(antenna_pos).as_array()
    bore = _point(boresight_target).as_array() - a
    to_cell = _point(cell).as_array() - a
    nb, nc = np.linalg.norm(bore), np.linalg.norm(to_cell)
    if nb == 0 or nc == 0:
        raise GeometryError("zero-length boresight or cell vector")
    c = float(np.dot(bore, to_cell) / (nb * nc))
    return math.acos(max(-1.0, min(1.0, c)))


def mirror_image(tx) -> Point3:
    """Reflection of a point through the RIS plane."""
    p = _point(tx)
    return Point3(p.x, p.y, -p.z)


def virtual_transmitter(d1: float, theta_des: float, phi_des: float) -> Point3:
    """Transmitter position whose specular reflection leaves along (theta_des, phi_des)."""
    if d1 <= 0:
        raise GeometryError("d1 must be positive")
    if not (0.0 <= theta_des <= math.pi / 2 + 1e-12):
        raise GeometryError("theta_des must lie in [0, pi/2]")
    st = math.sin(theta_des)
    return Point3(
        -d1 * st * math.cos(phi_des),
        -d1 * st * math.sin(phi_des),
        d1 * math.cos(theta_des),
    )


def cell_distances(cfg, terminal) -> np.ndarray:
    """Distances r_{n,m} from ``terminal`` to every cell, shape (N, M)."""
    t = _point(terminal)
    xs, ys = cell_coordinates(cfg)
    ddx = t.x - xs[np.newaxis, :]
    ddy = t.y - ys[:, np.newaxis]
    return np.sqrt(ddx * ddx + ddy * ddy + t.z * t.z)
