"""RIS configuration, phase profiles and phase-design codebooks."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .geometry import (
    TWO_PI,
    cell_coordinates,
    cell_distances,
    col_indices,
    virtual_transmitter,
)
from .radiation import CosinePattern, gain_closed_form

# power drawn per PIN-diode cell in the "on" state, mW
PIN_CELL_POWER_MW = 0.33


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RisConfig:
    """Geometry and electrical parameters of a rectangular RIS.

    ``rows`` (N) run along y with pitch ``dy``; ``cols`` (M) run along x with
    pitch ``dx``. When ``wavelength`` is omitted it is derived from
    ``frequency``.
    """

    rows: int
    cols: int
    dx: float
    dy: float
    amplitude: float = 1.0
    wavelength: float | None = None
    frequency: float | None = None
    cell_pattern: CosinePattern = field(default_factory=lambda: CosinePattern(3.0))

    def __post_init__(self):
        for name in ("rows", "cols"):
            v = getattr(self, name)
            if int(v) != v or v <= 0:
                raise ConfigError(f"{name} must be a positive integer, got {v}")
            if v % 2:
                raise ConfigError(f"{name} must be even, got {v}")
            object.__setattr__(self, name, int(v))
        if not (self.dx > 0 and self.dy > 0):
            raise ConfigError("cell pitch must be positive")
        if not (0 < self.amplitude <= 1):
            raise ConfigError(f"amplitude must lie in (0, 1], got {self.amplitude}")
        if self.wavelength is None:
            if self.frequency is None or self.frequency <= 0:
                raise ConfigError("either wavelength or a positive frequency is required")
            object.__setattr__(self, "wavelength", SPEED_OF_LIGHT / self.frequency)
        if not self.wavelength > 0:
            raise ConfigError("wavelength must be positive")
        lam = self.wavelength
        for name in ("dx", "dy"):
            d = getattr(self, name)
            if not (lam / 10 - 1e-12 <= d <= lam / 2 + 1e-12):
                warnings.warn(
                    f"{name}={d:g} m is outside the usual [lambda/10, lambda/2] range",
                    stacklevel=3,
                )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def n_cells(self) -> int:
        return self.rows * self.cols

    @property
    def cell_gain(self) -> float:
        return gain_closed_form(self.cell_pattern)

    @property
    def wavenumber(self) -> float:
        return TWO_PI / self.wavelength

    @property
    def width(self) -> float:
        return self.cols * self.dx

    @property
    def height(self) -> float:
        return self.rows * self.dy

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def is_electrically_large(self) -> bool:
        return self.width >= 10 * self.wavelength and self.height >= 10 * self.wavelength


@dataclass(frozen=True, eq=False)
class PhaseProfile:
    """Per-cell phase shifts phi_{n,m}, rows n ascending, columns m ascending.

    ``amplitude`` optionally overrides the configuration's uniform A per cell.
    """

    phases: np.ndarray
    amplitude: np.ndarray | None = None

    def __post_init__(self):
        ph = np.array(self.phases, dtype=float)
        if ph.ndim != 2:
            raise ConfigError("phase profile must be a 2-D array")
        if np.any(~np.isfinite(ph)):
            raise ConfigError("phase profile contains non-finite values")
        if np.any((ph < 0) | (ph >= TWO_PI)):
            raise ConfigError("phases must lie in [0, 2*pi)")
        ph.setflags(write=False)
        object.__setattr__(self, "phases", ph)
        if self.amplitude is not None:
            amp = np.array(self.amplitude, dtype=float)
            if amp.shape != ph.shape:
                raise ConfigError("amplitude shape does not match phases")
            if np.any((amp < 0) | (amp > 1)):
                raise ConfigError("per-cell amplitudes must lie in [0, 1]")
            amp.setflags(write=False)
            object.__setattr__(self, "amplitude", amp)

    @property
    def shape(self) -> tuple[int, int]:
        return self.phases.shape

    def check(self, cfg: RisConfig) -> None:
        if self.shape != cfg.shape:
            raise ConfigError(f"profile shape {self.shape} does not match RIS {cfg.shape}")

    def reflection(self, cfg: RisConfig) -> np.ndarray:
        """Complex reflection coefficients Gamma = A e^{j phi}."""
        self.check(cfg)
        amp = cfg.amplitude if self.amplitude is None else self.amplitude
        return amp * np.exp(1j * self.phases)

    def to_csv(self, path) -> None:
        lines = [",".join(f"{v:.9g}" for v in row) for row in self.phases]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def from_csv(cls, path) -> "PhaseProfile":
        rows = []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from None
        if len({len(r) for r in rows}) != 1:
            raise ConfigError(f"{path}: ragged phase matrix")
        # 9 significant digits can round values just below 2*pi up to it
        ph = np.array(rows)
        ph[ph >= TWO_PI] = 0.0
        return cls(ph)


def wrap_phase(x) -> np.ndarray:
    """Elementwise mod(x, 2*pi) guaranteed to land in [0, 2*pi)."""
    out = np.mod(np.asarray(x, dtype=float), TWO_PI)
    out[out >= TWO_PI] = 0.0
    return out


def uniform_profile(cfg: RisConfig, phi: float = 0.0) -> PhaseProfile:
    if not math.isfinite(phi):
        raise ConfigError("phase must be finite")
    return PhaseProfile(np.full(cfg.shape, wrap_phase(np.array([phi]))[0]))


def _direction_sum(a: float, b: float) -> float:
    s = a + b
    # exact specular pairs cancel only to rounding; treat them as exact zeros
    return 0.0 if abs(s) < 1e-12 else s


def farfield_deltas(theta_t: float, phi_t: float, theta_des: float, phi_des: float):
    """Phase-gradient coefficients (delta1, delta2) that steer to (theta_des, phi_des)."""
    st, sd = math.sin(theta_t), math.sin(theta_des)
    d1 = -_direction_sum(st * math.cos(phi_t), sd * math.cos(phi_des))
    d2 = -_direction_sum(st * math.sin(phi_t), sd * math.sin(phi_des))
    return d1 + 0.0, d2 + 0.0


def farfield_codebook(cfg: RisConfig, theta_t: float, phi_t: float,
                      theta_des: float, phi_des: float) -> PhaseProfile:
    """Linear phase gradient steering a plane wave from (theta_t, phi_t) to the desired direction."""
    delta1, delta2 = farfield_deltas(theta_t, phi_t, theta_des, phi_des)
    xs, ys = cell_coordinates(cfg)
    path = delta1 * xs[np.newaxis, :] + delta2 * ys[:, np.newaxis]
    return PhaseProfile(wrap_phase(cfg.wavenumber * path))


def nearfield_focus_codebook(cfg: RisConfig, tx, rx) -> PhaseProfile:
    """Phases cancelling the Tx-cell-Rx propagation phase at every cell."""
    if tx[2] <= 0 or rx[2] <= 0:
        raise ConfigError("tx and rx must be in front of the RIS")
    total = cell_distances(cfg, tx) + cell_distances(cfg, rx)
    return PhaseProfile(wrap_phase(cfg.wavenumber * total))


def nearfield_broadcast_codebook(cfg: RisConfig, tx, d1: float,
                                 theta_des: float, phi_des: float) -> PhaseProfile:
    """Phases making ``tx`` behave like a virtual transmitter that reflects towards the desired direction."""
    if tx[2] <= 0:
        raise ConfigError("tx must be in front of the RIS")
    virt = virtual_transmitter(d1, theta_des, phi_des)
    diff = cell_distances(cfg, tx) - cell_distances(cfg, virt)
    return PhaseProfile(wrap_phase(cfg.wavenumber * diff))


def two_beam_stripe_profile(cfg: RisConfig) -> PhaseProfile:
    """Column stripes 0, 0, pi, pi, ... keyed on mod(m, 4) with a non-negative remainder."""
    m = col_indices(cfg.cols)
    col_phase = np.where(np.mod(m, 4) <= 1, 0.0, math.pi)
    return PhaseProfile(np.tile(col_phase, (cfg.rows, 1)))


def power_consumption(kind: str, n_on: int, n_cells: int | None = None) -> float:
    """Static power drawn by the RIS cells in watts."""
    if n_on < 0 or int(n_on) != n_on:
        raise ConfigError("n_on must be a non-negative integer")
    if n_cells is not None and n_on > n_cells:
        raise ConfigError(f"n_on={n_on} exceeds the {n_cells} cells of the RIS")
    if kind == "varactor":
        return 0.0
    if kind == "pin":
        # scale in mW first: 0.33 * 1700 / 1000 is exactly 0.561, 0.33e-3 * 1700 is not
        return PIN_CELL_POWER_MW * n_on / 1000.0
    raise ConfigError(f"unknown RIS technology {kind!r}; expected 'varactor' or 'pin'")
