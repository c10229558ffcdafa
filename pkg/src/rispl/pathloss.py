"""Received power and path loss of RIS-assisted links.

The general model sums the contribution of every unit cell coherently. The
closed forms cover far-field beamforming, near-field beamforming and
near-field broadcasting. Callers pick the regime explicitly;
:func:`field_region` only reports which one applies.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from ._kernels import ordered_sum, sum_over_receivers
from .geometry import (
    GeometryError,
    Point3,
    SphericalPlacement,
    cell_coordinates,
    cell_distances,
    mirror_image,
    virtual_transmitter,
)
from .radiation import AntennaSpec, CosinePattern, pattern_value
from .ris import PhaseProfile, RisConfig

REGIMES = ("general", "far_field", "near_field_beam", "near_field_broadcast")


@dataclass(frozen=True)
class LinkGeometry:
    """Tx and Rx placements around the RIS centre plus their antennas.

    The antennas are re-positioned at the terminal locations on construction.
    """

    tx: SphericalPlacement
    rx: SphericalPlacement
    tx_antenna: AntennaSpec
    rx_antenna: AntennaSpec

    def __post_init__(self):
        object.__setattr__(self, "tx_antenna", self.tx_antenna.placed(self.tx.to_point()))
        object.__setattr__(self, "rx_antenna", self.rx_antenna.placed(self.rx.to_point()))
        if self.tx_point.z <= 0 or self.rx_point.z <= 0:
            raise GeometryError("both terminals must lie in front of the RIS (z > 0)")

    @property
    def tx_point(self) -> Point3:
        return self.tx.to_point()

    @property
    def rx_point(self) -> Point3:
        return self.rx.to_point()

    @property
    def d1(self) -> float:
        return self.tx.distance

    @property
    def d2(self) -> float:
        return self.rx.distance

    def swapped(self) -> "LinkGeometry":
        return LinkGeometry(self.rx, self.tx, self.rx_antenna, self.tx_antenna)

    def with_rx(self, rx: SphericalPlacement) -> "LinkGeometry":
        return replace(self, rx=rx)

    def with_tx(self, tx: SphericalPlacement) -> "LinkGeometry":
        return replace(self, tx=tx)


@dataclass(frozen=True)
class PowerResult:
    received_power: float
    path_loss: float
    regime: str
    in_coverage: bool | None = None

    @property
    def received_dbm(self) -> float:
        if self.received_power <= 0:
            return -math.inf
        return 10.0 * math.log10(self.received_power / 1e-3)

    @property
    def path_loss_db(self) -> float:
        return 10.0 * math.log10(self.path_loss) if math.isfinite(self.path_loss) else math.inf


def _result(p_t: float, p_r: float, regime: str, in_coverage=None) -> PowerResult:
    pl = p_t / p_r if p_r > 0 else math.inf
    return PowerResult(p_r, pl, regime, in_coverage)


@dataclass(frozen=True)
class FieldRegionReport:
    classic_boundary: float
    redefined_boundary: float
    lower_bound: float
    tx_region: str
    rx_region: str
    below_lower_bound: bool
    min_cell_distance: float


# --- per-cell building blocks ---------------------------------------------


def _leg_parts(cfg: RisConfig, terminal: Point3, antenna: AntennaSpec):
    """sqrt(F_antenna * F_cell) and distance for every cell, each (N, M)."""
    xs, ys = cell_coordinates(cfg)
    bx = xs[np.newaxis, :] - terminal.x
    by = ys[:, np.newaxis] - terminal.y
    bz = -terminal.z
    r = np.sqrt(bx * bx + by * by + bz * bz)
    if np.any(r == 0):
        raise GeometryError("terminal coincides with a unit cell")
    a = np.asarray(antenna.boresight_target, dtype=float) - np.asarray(terminal, dtype=float)
    a_norm = float(np.linalg.norm(a))
    if a_norm == 0:
        raise GeometryError("antenna boresight target coincides with the antenna")
    c_ant = np.clip((a[0] * bx + a[1] * by + a[2] * bz) / (a_norm * r), -1.0, 1.0)
    c_cell = terminal.z / r
    amp = np.sqrt(cfg.cell_pattern.from_cosine(c_cell) * antenna.pattern.from_cosine(c_ant))
    return amp, r


def _leg(cfg: RisConfig, terminal: Point3, antenna: AntennaSpec) -> np.ndarray:
    amp, r = _leg_parts(cfg, terminal, antenna)
    return amp * np.exp(-1j * cfg.wavenumber * r) / r


def _scale(cfg: RisConfig, link: LinkGeometry) -> float:
    return (link.tx_antenna.gain * link.rx_antenna.gain * cfg.cell_gain * cfg.dx * cfg.dy
            * cfg.wavelength ** 2 / (64.0 * math.pi ** 3))


def combined_pattern_grid(cfg: RisConfig, link: LinkGeometry) -> np.ndarray:
    """Combined pattern factor F^combine for every cell, shape (N, M)."""
    at, _ = _leg_parts(cfg, link.tx_point, link.tx_antenna)
    ar, _ = _leg_parts(cfg, link.rx_point, link.rx_antenna)
    return (at * ar) ** 2


def coherent_sum(cfg: RisConfig, profile: PhaseProfile, link: LinkGeometry) -> complex:
    """sum_{n,m} sqrt(F^combine) Gamma e^{-jk(r^t + r^r)} / (r^t r^r)."""
    gamma = profile.reflection(cfg)
    lt = _leg(cfg, link.tx_point, link.tx_antenna)
    lr = _leg(cfg, link.rx_point, link.rx_antenna)
    # lt * lr is commutative bit-for-bit, which keeps Tx/Rx swaps exact
    return complex(ordered_sum(gamma * (lt * lr)))


def received_power_general(cfg: RisConfig, profile: PhaseProfile, link: LinkGeometry,
                           p_t: float = 1.0) -> PowerResult:
    s = coherent_sum(cfg, profile, link)
    p_r = p_t * _scale(cfg, link) * (s.real * s.real + s.imag * s.imag)
    return _result(p_t, p_r, "general")


def received_power_general_sweep(cfg: RisConfig, profile: PhaseProfile, link: LinkGeometry,
                                 rx_points: np.ndarray, p_t: float = 1.0) -> np.ndarray:
    """General-model received power for many receiver positions sharing one Tx.

    Every receiver uses ``link.rx_antenna`` (pattern and gain) and is aimed
    at the antenna's boresight target. Returns watts, shape (P,).
    """
    rx_points = np.ascontiguousarray(rx_points, dtype=float).reshape(-1, 3)
    if np.any(rx_points[:, 2] <= 0):
        raise GeometryError("receivers must lie in front of the RIS (z > 0)")
    weights = np.ascontiguousarray(profile.reflection(cfg) * _leg(cfg, link.tx_point, link.tx_antenna))
    xs, ys = cell_coordinates(cfg)
    target = np.asarray(link.rx_antenna.boresight_target, dtype=float)
    sums = sum_over_receivers(weights, xs, ys, rx_points, target,
                              cfg.cell_pattern.alpha / 2.0, link.rx_antenna.pattern.alpha / 2.0,
                              cfg.wavenumber)
    return p_t * _scale(cfg, link) * np.abs(sums) ** 2


@dataclass(frozen=True)
class CellDiagnostics:
    incident_power: np.ndarray
    field: np.ndarray


def cell_diagnostics(cfg: RisConfig, profile: PhaseProfile, link: LinkGeometry,
                     p_t: float = 1.0) -> CellDiagnostics:
    """Per-cell incident power and received field contribution (field divided by sqrt(Z0))."""
    at, rt = _leg_parts(cfg, link.tx_point, link.tx_antenna)
    ar, rr = _leg_parts(cfg, link.rx_point, link.rx_antenna)
    incident = link.tx_antenna.gain * p_t / (4 * math.pi * rt ** 2) * at ** 2 * cfg.dx * cfg.dy
    coeff = math.sqrt(p_t * link.tx_antenna.gain * cfg.cell_gain * cfg.dx * cfg.dy / (8 * math.pi ** 2))
    field = (coeff * at * ar * profile.reflection(cfg) / (rt * rr)
             * np.exp(-1j * cfg.wavenumber * (rt + rr)))
    return CellDiagnostics(incident, field)


# --- far field ---------------------------------------------------------------


def sinc(x):
    """Unnormalised sin(x)/x with the removable singularity patched by its series."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)
    return out.item() if out.ndim == 0 else out


def _dirichlet(count: int, w):
    """sum_{i} e^{j (i - 1/2) w} over i = 1 - count/2 .. count/2, i.e. count*sinc(count w/2)/sinc(w/2)."""
    w = np.asarray(w, dtype=float)
    half = w / 2.0
    den = sinc(half)
    # at grating lobes (w = 2*pi*q, q != 0) the ratio is the 0/0 limit
    at_lobe = np.abs(np.sin(half)) < 1e-12
    safe_den = np.where(at_lobe, 1.0, den)
    ratio = np.where(at_lobe, count * np.cos(count * half) / np.where(at_lobe, np.cos(half), 1.0),
                     count * sinc(count * half) / safe_den)
    return ratio.item() if ratio.ndim == 0 else ratio


def array_factor(cfg: RisConfig, theta_t, phi_t, theta_r, phi_r, delta1=0.0, delta2=0.0):
    """Closed-form array factor beta of a uniformly excited rectangular grid."""
    k = cfg.wavenumber
    u = k * (np.sin(theta_t) * np.cos(phi_t) + np.sin(theta_r) * np.cos(phi_r) + delta1) * cfg.dx
    v = k * (np.sin(theta_t) * np.sin(phi_t) + np.sin(theta_r) * np.sin(phi_r) + delta2) * cfg.dy
    return _dirichlet(cfg.cols, u) * _dirichlet(cfg.rows, v)


def array_factor_bruteforce(cfg: RisConfig, theta_t, phi_t, theta_r, phi_r, delta1=0.0, delta2=0.0) -> complex:
    """Direct double sum of e^{j((m-1/2)u + (n-1/2)v)}; reference for :func:`array_factor`."""
    k = cfg.wavenumber
    u = k * (math.sin(theta_t) * math.cos(phi_t) + math.sin(theta_r) * math.cos(phi_r) + delta1) * cfg.dx
    v = k * (math.sin(theta_t) * math.sin(phi_t) + math.sin(theta_r) * math.sin(phi_r) + delta2) * cfg.dy
    total = 0j
    for n in range(1 - cfg.rows // 2, cfg.rows // 2 + 1):
        for m in range(1 - cfg.cols // 2, cfg.cols // 2 + 1):
            total += complex(math.cos((m - 0.5) * u + (n - 0.5) * v),
                             math.sin((m - 0.5) * u + (n - 0.5) * v))
    return total


def _farfield_prefactor(cfg: RisConfig, link: LinkGeometry, theta_r: float) -> float:
    f_t = pattern_value(cfg.cell_pattern, link.tx.theta)
    f_r = pattern_value(cfg.cell_pattern, theta_r)
    return (_scale(cfg, link) * f_t * f_r * cfg.amplitude ** 2
            / (link.d1 ** 2 * link.d2 ** 2))


def received_power_farfield(cfg: RisConfig, link: LinkGeometry, delta1: float = 0.0,
                            delta2: float = 0.0, p_t: float = 1.0) -> PowerResult:
    """Far-field received power for a linear phase gradient (delta1, delta2).

    delta = 0 is the uniform (specular) profile.
    """
    beta = array_factor(cfg, link.tx.theta, link.tx.phi, link.rx.theta, link.rx.phi, delta1, delta2)
    p_r = p_t * _farfield_prefactor(cfg, link, link.rx.theta) * beta ** 2
    return _result(p_t, p_r, "far_field")


def received_power_farfield_max(cfg: RisConfig, link: LinkGeometry, p_t: float = 1.0) -> PowerResult:
    """Peak far-field power with the beam aimed at the receiver direction."""
    p_r = p_t * _farfield_prefactor(cfg, link, link.rx.theta) * cfg.n_cells ** 2
    return _result(p_t, p_r, "far_field")


def pathloss_farfield_beam(cfg: RisConfig, link: LinkGeometry) -> float:
    f_t = pattern_value(cfg.cell_pattern, link.tx.theta)
    f_r = pattern_value(cfg.cell_pattern, link.rx.theta)
    num = 64.0 * math.pi ** 3 * (link.d1 * link.d2) ** 2
    den = (link.tx_antenna.gain * link.rx_antenna.gain * cfg.cell_gain * cfg.n_cells ** 2
           * cfg.dx * cfg.dy * cfg.wavelength ** 2 * f_t * f_r * cfg.amplitude ** 2)
    return num / den if den > 0 else math.inf


# --- near-field beamforming ------------------------------------------------


def received_power_nearfield_beam(cfg: RisConfig, profile: PhaseProfile, link: LinkGeometry,
                                  p_t: float = 1.0) -> PowerResult:
    """Coherent sum with uniform amplitude A and per-cell phase compensation."""
    profile.check(cfg)
    at, rt = _leg_parts(cfg, link.tx_point, link.tx_antenna)
    ar, rr = _leg_parts(cfg, link.rx_point, link.rx_antenna)
    residual = cfg.wavenumber * (rt + rr) - profile.phases
    terms = (at * ar) / (rt * rr) * np.exp(-1j * residual)
    s = complex(ordered_sum(terms))
    p_r = p_t * _scale(cfg, link) * cfg.amplitude ** 2 * abs(s) ** 2
    return _result(p_t, p_r, "near_field_beam")


def received_power_nearfield_beam_max(cfg: RisConfig, link: LinkGeometry, p_t: float = 1.0) -> PowerResult:
    """Upper bound reached when every cell's contribution arrives in phase."""
    at, rt = _leg_parts(cfg, link.tx_point, link.tx_antenna)
    ar, rr = _leg_parts(cfg, link.rx_point, link.rx_antenna)
    s = ordered_sum(((at * ar) / (rt * rr)).astype(complex)).real
    p_r = p_t * _scale(cfg, link) * cfg.amplitude ** 2 * s * s
    return _result(p_t, p_r, "near_field_beam")


def pathloss_nearfield_beam(cfg: RisConfig, profile: PhaseProfile | None, link: LinkGeometry) -> float:
    """Near-field beamforming path loss; with ``profile=None`` the optimal-phase value."""
    if profile is None:
        return received_power_nearfield_beam_max(cfg, link).path_loss
    return received_power_nearfield_beam(cfg, profile, link).path_loss


# --- near-field broadcasting -----------------------------------------------


def broadcast_coverage_test(cfg: RisConfig, source, tx_antenna: AntennaSpec, rx_direction,
                            lobe_half_width: float | None = None) -> bool:
    """Whether direction (theta_r, phi_r) lies in the lit solid angle of an image source.

    ``source`` is the real transmitter (specular reflection) or the virtual
    transmitter (phase-designed broadcast). Its mirror image must see the RIS
    rectangle along the direction, and the direction must fall inside the
    mirrored antenna's main lobe.
    """
    theta_r, phi_r = rx_direction
    img = mirror_image(source)
    ct = math.cos(theta_r)
    if ct <= 1e-12:
        return False
    d = np.array([math.sin(theta_r) * math.cos(phi_r), math.sin(theta_r) * math.sin(phi_r), ct])
    t = -img.z / ct
    hit_x, hit_y = img.x + t * d[0], img.y + t * d[1]
    eps = 1e-12
    if abs(hit_x) > cfg.width / 2 + eps or abs(hit_y) > cfg.height / 2 + eps:
        return False
    bore = mirror_image(tx_antenna.boresight_target).as_array() - img.as_array()
    nb = np.linalg.norm(bore)
    if nb == 0:
        raise GeometryError("antenna boresight target coincides with its position")
    off = math.acos(max(-1.0, min(1.0, float(np.dot(bore, d) / nb))))
    half = tx_antenna.lobe_half_width if lobe_half_width is None else lobe_half_width
    return off <= half + 1e-12


def _broadcast_source(link: LinkGeometry, virtual_direction):
    if virtual_direction is None:
        return link.tx_point
    return virtual_transmitter(link.d1, *virtual_direction)


def received_power_nearfield_broadcast(cfg: RisConfig, link: LinkGeometry, p_t: float = 1.0,
                                       virtual_direction=None,
                                       lobe_half_width: float | None = None) -> PowerResult:
    """Image-source received power: Friis over d1 + d2 inside the lit region, zero outside.

    ``virtual_direction`` = (theta_des, phi_des) selects the phase-designed
    broadcast; the lit region then follows the virtual transmitter.
    """
    if not cfg.is_electrically_large():
        warnings.warn("near-field broadcast formula assumes an electrically large RIS "
                      "(both sides >= 10 wavelengths)", stacklevel=2)
    src = _broadcast_source(link, virtual_direction)
    covered = broadcast_coverage_test(cfg, src, link.tx_antenna, (link.rx.theta, link.rx.phi),
                                      lobe_half_width)
    if not covered:
        return PowerResult(0.0, math.inf, "near_field_broadcast", False)
    p_r = p_t / pathloss_nearfield_broadcast(cfg, link)
    return PowerResult(p_r, p_t / p_r, "near_field_broadcast", True)


def pathloss_nearfield_broadcast(cfg: RisConfig, link: LinkGeometry) -> float:
    return (16.0 * math.pi ** 2 * (link.d1 + link.d2) ** 2
            / (link.tx_antenna.gain * link.rx_antenna.gain * cfg.wavelength ** 2 * cfg.amplitude ** 2))


# --- field regions ------------------------------------------------------------


def classic_boundary(cfg: RisConfig) -> float:
    """2 D^2 / lambda with D^2 taken as the aperture area M N d_x d_y."""
    return 2.0 * cfg.n_cells * cfg.dx * cfg.dy / cfg.wavelength


def redefined_boundary(cfg: RisConfig, theta_t: float, theta_r: float) -> float:
    """Distance at which the far-field and broadcast path losses meet (d2 >> boundary)."""
    f_t = pattern_value(cfg.cell_pattern, theta_t)
    f_r = pattern_value(cfg.cell_pattern, theta_r)
    return cfg.n_cells * math.sqrt(cfg.cell_gain * cfg.dx * cfg.dy * f_t * f_r / (4.0 * math.pi))


def crossover_distance(cfg: RisConfig, theta_t: float, theta_r: float, d2: float) -> float:
    """Exact d1 where the far-field and broadcast path losses are equal for a finite d2.

    Returns inf when d2 does not exceed the redefined boundary.
    """
    lb = redefined_boundary(cfg, theta_t, theta_r)
    return lb * d2 / (d2 - lb) if d2 > lb else math.inf


def field_region(cfg: RisConfig, link: LinkGeometry) -> FieldRegionReport:
    lb = redefined_boundary(cfg, link.tx.theta, link.rx.theta)
    lower = 5.0 * cfg.wavelength
    r_min = float(min(cell_distances(cfg, link.tx_point).min(), cell_distances(cfg, link.rx_point).min()))
    below = r_min < lower
    if below:
        warnings.warn(f"a terminal is {r_min:.4g} m from a unit cell, closer than 5 lambda "
                      f"({lower:.4g} m); per-cell far-field assumption is violated", stacklevel=2)
    return FieldRegionReport(
        classic_boundary=classic_boundary(cfg),
        redefined_boundary=lb,
        lower_bound=lower,
        tx_region="near" if link.d1 < lb else "far",
        rx_region="near" if link.d2 < lb else "far",
        below_lower_bound=below,
        min_cell_distance=r_min,
    )
