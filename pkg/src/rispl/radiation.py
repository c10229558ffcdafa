"""Normalized power patterns of the cos^alpha family and derived gains."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .geometry import ORIGIN, Point3, antenna_offboresight_angle, cell_distance


@dataclass(frozen=True)
class CosinePattern:
    """F(theta) = cos(theta)**alpha on the front hemisphere, 0 behind it."""

    alpha: float

    def __post_init__(self):
        if not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise ValueError(f"pattern exponent must be >= 0, got {self.alpha}")

    def __call__(self, theta):
        return pattern_value(self, theta)

    def from_cosine(self, c):
        """Pattern value given cos(theta) instead of theta (vectorised)."""
        c = np.asarray(c, dtype=float)
        return np.where(c >= 0.0, np.abs(c) ** self.alpha, 0.0)

    def half_power_angle(self) -> float:
        """Off-boresight angle where the pattern falls to 0.5 (-3 dB)."""
        if self.alpha == 0:
            return math.pi / 2
        return math.acos(2.0 ** (-1.0 / self.alpha))


def pattern_value(p: CosinePattern, theta):
    theta = np.asarray(theta, dtype=float)
    if np.any((theta < 0) | (theta > math.pi)) or np.any(~np.isfinite(theta)):
        raise ValueError("theta must lie in [0, pi]")
    c = np.cos(theta)
    # theta = pi/2 belongs to the front branch; cos(pi/2) rounds to +6e-17
    front = theta <= math.pi / 2
    out = np.where(front, np.abs(c) ** p.alpha, 0.0)
    return out.item() if out.ndim == 0 else out


def gain_closed_form(p: CosinePattern) -> float:
    return 2.0 * (p.alpha + 1.0)


def gain_from_pattern(p: CosinePattern) -> float:
    """Directivity 4*pi / integral(F sin(theta)) at 100 % efficiency.

    The pattern is azimuth independent, so the phi integral contributes 2*pi.
    The elevation integral is done by adaptive quadrature with the hemisphere
    edge as a breakpoint.
    """
    def integrand(t):
        return pattern_value(p, t) * math.sin(t)

    front, _ = integrate.quad(integrand, 0.0, math.pi / 2, epsabs=0.0, epsrel=1e-13, limit=200)
    back, _ = integrate.quad(integrand, math.pi / 2, math.pi, epsabs=0.0, epsrel=1e-13, limit=200)
    return 4.0 * math.pi / (2.0 * math.pi * (front + back))


def to_db(x):
    return 10.0 * np.log10(x)


def from_db(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


@dataclass(frozen=True)
class AntennaSpec:
    """Transmit or receive antenna.

    ``position`` is normally filled in by the link that owns the antenna.
    ``boresight_target`` defaults to the RIS centre.
    """

    pattern: CosinePattern
    gain: float
    position: Point3 | None = None
    boresight_target: Point3 = ORIGIN
    main_lobe_half_width: float | None = None

    def __post_init__(self):
        if not self.gain > 0:
            raise ValueError("antenna gain must be positive")

    @classmethod
    def from_pattern(cls, alpha: float, **kw) -> "AntennaSpec":
        pat = CosinePattern(alpha)
        return cls(pat, gain_closed_form(pat), **kw)

    def placed(self, position) -> "AntennaSpec":
        return replace(self, position=Point3(*position))

    @property
    def lobe_half_width(self) -> float:
        if self.main_lobe_half_width is not None:
            return self.main_lobe_half_width
        return self.pattern.half_power_angle()


def combined_pattern_factor(tx: AntennaSpec, rx: AntennaSpec, cell_pattern: CosinePattern, cell) -> float:
    """F^tx(theta^tx) F(theta^t) F(theta^r) F^rx(theta^rx) for one cell."""
    if tx.position is None or rx.position is None:
        raise ValueError("antennas must be placed before evaluating patterns")
    th_tx = antenna_offboresight_angle(tx.position, tx.boresight_target, cell)
    th_rx = antenna_offboresight_angle(rx.position, rx.boresight_target, cell)
    th_t = _elevation_from_cell(cell, tx.position)
    th_r = _elevation_from_cell(cell, rx.position)
    return float(
        pattern_value(tx.pattern, th_tx)
        * pattern_value(cell_pattern, th_t)
        * pattern_value(cell_pattern, th_r)
        * pattern_value(rx.pattern, th_rx)
    )


def _elevation_from_cell(cell, terminal) -> float:
    # no reflecting-side check: terminals behind the plane simply get F = 0
    r = cell_distance(terminal, cell)
    if r == 0:
        raise ValueError("terminal coincides with cell")
    return math.acos(max(-1.0, min(1.0, (terminal[2] - cell[2]) / r)))
