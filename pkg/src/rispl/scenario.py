"""Distance sweeps, angular heatmaps, measurement comparison and scenario files."""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .geometry import GeometryError, SphericalPlacement
from .pathloss import (
    REGIMES,
    LinkGeometry,
    PowerResult,
    received_power_farfield,
    received_power_farfield_max,
    received_power_general,
    received_power_general_sweep,
    received_power_nearfield_beam,
    received_power_nearfield_beam_max,
    received_power_nearfield_broadcast,
)
from .presets import antenna_preset, default_antenna, ris_preset
from .radiation import AntennaSpec, CosinePattern, gain_closed_form
from .ris import (
    ConfigError,
    PhaseProfile,
    RisConfig,
    farfield_codebook,
    farfield_deltas,
    nearfield_broadcast_codebook,
    nearfield_focus_codebook,
    two_beam_stripe_profile,
    uniform_profile,
)

SWEEP_MODES = ("distance_d2", "distance_d1", "angular_heatmap")
DESIGN_KINDS = ("uniform", "farfield", "nearfield_focus", "nearfield_broadcast", "stripe", "file")
CSV_HEADER = ("d1_m", "d2_m", "theta_r_deg", "phi_r_deg", "regime", "pr_dbm", "pr_w",
              "path_loss_db", "in_coverage")
MEASUREMENT_HEADER = ("d1_m", "d2_m", "pr_dbm", "tag")


class ScenarioError(ValueError):
    pass


# --- phase design -------------------------------------------------------------


@dataclass(frozen=True)
class PhaseDesign:
    """How the RIS phase profile is produced for a given link.

    Angles are radians. ``phase`` is the common phase of the uniform design,
    ``path`` the CSV matrix of the ``file`` design.
    """

    kind: str = "uniform"
    theta_des: float | None = None
    phi_des: float | None = None
    phase: float = 0.0
    path: str | None = None

    def __post_init__(self):
        if self.kind not in DESIGN_KINDS:
            raise ScenarioError(f"unknown phase design {self.kind!r}; expected one of {DESIGN_KINDS}")
        if self.kind in ("farfield", "nearfield_broadcast") and (self.theta_des is None or self.phi_des is None):
            raise ScenarioError(f"phase design {self.kind!r} needs theta_des and phi_des")
        if self.kind == "file" and not self.path:
            raise ScenarioError("phase design 'file' needs a path")

    def build(self, cfg: RisConfig, link: LinkGeometry) -> PhaseProfile:
        if self.kind == "uniform":
            return uniform_profile(cfg, self.phase)
        if self.kind == "farfield":
            return farfield_codebook(cfg, link.tx.theta, link.tx.phi, self.theta_des, self.phi_des)
        if self.kind == "nearfield_focus":
            return nearfield_focus_codebook(cfg, link.tx_point, link.rx_point)
        if self.kind == "nearfield_broadcast":
            return nearfield_broadcast_codebook(cfg, link.tx_point, link.d1, self.theta_des, self.phi_des)
        if self.kind == "stripe":
            return two_beam_stripe_profile(cfg)
        prof = PhaseProfile.from_csv(self.path)
        prof.check(cfg)
        return prof


def evaluate(cfg: RisConfig, link: LinkGeometry, design: PhaseDesign, regime: str,
             p_t: float = 1.0) -> PowerResult:
    """Received power of one link in one regime, using ``design`` where it applies.

    Closed forms use the matching analytic optimum: the far-field regime takes
    the design's phase gradient (zero for uniform, beam aimed at the receiver
    otherwise), the near-field beam regime takes the in-phase bound for the
    focusing design, and the broadcast regime follows the virtual transmitter
    for the broadcast design.
    """
    if regime == "general":
        return received_power_general(cfg, design.build(cfg, link), link, p_t)
    if regime == "far_field":
        if design.kind == "uniform":
            return received_power_farfield(cfg, link, 0.0, 0.0, p_t)
        if design.kind == "farfield":
            d1, d2 = farfield_deltas(link.tx.theta, link.tx.phi, design.theta_des, design.phi_des)
            return received_power_farfield(cfg, link, d1, d2, p_t)
        return received_power_farfield_max(cfg, link, p_t)
    if regime == "near_field_beam":
        if design.kind == "nearfield_focus":
            return received_power_nearfield_beam_max(cfg, link, p_t)
        return received_power_nearfield_beam(cfg, design.build(cfg, link), link, p_t)
    if regime == "near_field_broadcast":
        virt = None
        if design.kind == "nearfield_broadcast":
            virt = (design.theta_des, design.phi_des)
        return received_power_nearfield_broadcast(cfg, link, p_t, virtual_direction=virt)
    raise ScenarioError(f"unknown regime {regime!r}; expected one of {REGIMES}")


# --- sweeps -------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    """A sweep over d2, d1 or receiver direction around a template link."""

    mode: str
    cfg: RisConfig
    link: LinkGeometry
    design: PhaseDesign = field(default_factory=PhaseDesign)
    p_t: float = 1.0
    start: float = 1.0
    stop: float = 100.0
    step: float = 1.0
    resolution_deg: float = 1.0
    regimes: tuple[str, ...] = ("general",)

    def __post_init__(self):
        if self.mode not in SWEEP_MODES:
            raise ScenarioError(f"unknown sweep mode {self.mode!r}; expected one of {SWEEP_MODES}")
        bad = [r for r in self.regimes if r not in REGIMES]
        if bad or not self.regimes:
            raise ScenarioError(f"invalid regimes {bad or '(none)'}; expected a subset of {REGIMES}")
        if not self.p_t > 0:
            raise ScenarioError("transmit power must be positive")
        if self.mode == "angular_heatmap":
            if not (0 < self.resolution_deg <= 90):
                raise ScenarioError("heatmap resolution must lie in (0, 90] degrees")
        else:
            if not self.step > 0:
                raise ScenarioError("sweep step must be positive")
            if not (0 < self.start < self.stop):
                raise ScenarioError("sweep needs 0 < start < stop")

    def axis(self) -> np.ndarray:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return self.start + self.step * np.arange(count)


@dataclass(frozen=True)
class SweepRow:
    d1: float
    d2: float
    theta_r: float
    phi_r: float
    regime: str
    received_power: float
    path_loss: float
    in_coverage: bool | None = None
    error: str | None = None

    @property
    def received_dbm(self) -> float:
        if self.error is not None:
            return math.nan
        return 10.0 * math.log10(self.received_power / 1e-3) if self.received_power > 0 else -math.inf

    @property
    def path_loss_db(self) -> float:
        if self.error is not None:
            return math.nan
        return 10.0 * math.log10(self.path_loss) if math.isfinite(self.path_loss) else math.inf


@dataclass
class SweepGrid:
    rows: list[SweepRow]
    argmax: SweepRow | None = None

    def column(self, name: str, regime: str | None = None) -> np.ndarray:
        sel = [r for r in self.rows if regime is None or r.regime == regime]
        return np.array([getattr(r, name) for r in sel])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow(_csv_fields(r))
        if self.argmax is not None:
            a = self.argmax
            buf.write(f"# argmax theta_r_deg={_fmt(math.degrees(a.theta_r))} "
                      f"phi_r_deg={_fmt(math.degrees(a.phi_r))} pr_dbm={_fmt_db(a.received_dbm)}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        def row(r: SweepRow) -> dict:
            return {
                "d1_m": r.d1, "d2_m": r.d2,
                "theta_r_deg": math.degrees(r.theta_r), "phi_r_deg": math.degrees(r.phi_r),
                "regime": r.regime, "pr_w": r.received_power,
                "pr_dbm": _json_num(r.received_dbm), "path_loss_db": _json_num(r.path_loss_db),
                "in_coverage": r.in_coverage, "error": r.error,
            }
        doc = {"rows": [row(r) for r in self.rows]}
        if self.argmax is not None:
            doc["argmax"] = row(self.argmax)
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _fmt_db(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return f"{x:.6f}"


def _json_num(x: float):
    return x if math.isfinite(x) else str(x)


def _csv_fields(r: SweepRow) -> list[str]:
    if r.error is not None:
        cov = "error"
    else:
        cov = "" if r.in_coverage is None else str(r.in_coverage).lower()
    pr_w = "nan" if r.error is not None else f"{r.received_power:.9e}"
    return [_fmt(r.d1), _fmt(r.d2), _fmt(math.degrees(r.theta_r)), _fmt(math.degrees(r.phi_r)),
            r.regime, _fmt_db(r.received_dbm), pr_w, _fmt_db(r.path_loss_db), cov]


def run_distance_sweep(spec: SweepSpec) -> SweepGrid:
    """One row per axis point per regime, in axis order then regime order.

    Points that cannot be evaluated become rows carrying the error message
    instead of aborting the sweep.
    """
    if spec.mode == "angular_heatmap":
        raise ScenarioError("use run_angular_heatmap for angular sweeps")
    rows = []
    for d in spec.axis():
        d = float(d)
        for regime in spec.regimes:
            try:
                if spec.mode == "distance_d2":
                    link = spec.link.with_rx(replace(spec.link.rx, distance=d))
                else:
                    link = spec.link.with_tx(replace(spec.link.tx, distance=d))
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    res = evaluate(spec.cfg, link, spec.design, regime, spec.p_t)
                rows.append(SweepRow(link.d1, link.d2, link.rx.theta, link.rx.phi, regime,
                                     res.received_power, res.path_loss, res.in_coverage))
            except (GeometryError, ConfigError, ScenarioError, OSError) as exc:
                d1 = d if spec.mode == "distance_d1" else spec.link.d1
                d2 = d if spec.mode == "distance_d2" else spec.link.d2
                rows.append(SweepRow(d1, d2, spec.link.rx.theta, spec.link.rx.phi, regime,
                                     math.nan, math.nan, None, str(exc)))
    return SweepGrid(rows)


@dataclass
class Heatmap:
    """Received power on a (theta_r, phi_r) grid at fixed d1 and d2, watts."""

    theta_deg: np.ndarray
    phi_deg: np.ndarray
    power: np.ndarray
    d1: float
    d2: float
    p_t: float = 1.0

    @property
    def argmax(self) -> tuple[float, float, float]:
        i, j = np.unravel_index(int(np.argmax(self.power)), self.power.shape)
        return float(self.theta_deg[i]), float(self.phi_deg[j]), float(self.power[i, j])

    def local_maxima(self, floor_db: float = -3.0, radius: int = 2) -> list[tuple[float, float, float]]:
        """Grid points that dominate their neighbourhood and lie within ``floor_db`` of the peak.

        The neighbourhood wraps in azimuth and is clipped in elevation.
        Plateaus yield one point each. Sorted by descending power.
        """
        p = self.power
        n_th, n_ph = p.shape
        floor = p.max() * 10.0 ** (floor_db / 10.0)
        found = []
        for i in range(n_th):
            for j in range(n_ph):
                v = p[i, j]
                if v < floor or v <= 0:
                    continue
                lo, hi = max(0, i - radius), min(n_th, i + radius + 1)
                cols = [(j + dj) % n_ph for dj in range(-radius, radius + 1)]
                block = p[lo:hi][:, cols]
                if v < block.max():
                    continue
                # keep only the first point of a plateau in scan order
                earlier = [(a, b) for a, b in found
                           if abs(a - i) <= radius and min(abs(b - j), n_ph - abs(b - j)) <= radius]
                if earlier:
                    continue
                found.append((i, j))
        out = [(float(self.theta_deg[i]), float(self.phi_deg[j]), float(p[i, j])) for i, j in found]
        return sorted(out, key=lambda t: -t[2])

    def to_grid(self) -> SweepGrid:
        rows = []
        for i, th in enumerate(self.theta_deg):
            for j, ph in enumerate(self.phi_deg):
                pw = float(self.power[i, j])
                rows.append(SweepRow(self.d1, self.d2, math.radians(th), math.radians(ph), "general",
                                     pw, self.p_t / pw if pw > 0 else math.inf))
        th, ph, pw = self.argmax
        best = SweepRow(self.d1, self.d2, math.radians(th), math.radians(ph), "general",
                        pw, self.p_t / pw if pw > 0 else math.inf)
        return SweepGrid(rows, best)


def heatmap_axes(resolution_deg: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """theta in [0, 90] inclusive and phi in [0, 360) on a uniform grid, degrees."""
    n_th = int(math.floor(90.0 / resolution_deg + 1e-9)) + 1
    n_ph = int(math.ceil(360.0 / resolution_deg - 1e-9))
    return resolution_deg * np.arange(n_th), resolution_deg * np.arange(n_ph)


def run_angular_heatmap(spec: SweepSpec) -> Heatmap:
    """General-model received power over all receiver directions at distance d2.

    The phase profile is designed once for the template link; only the
    receiver moves. The receive antenna keeps pointing at its boresight target.
    """
    cfg, link = spec.cfg, spec.link
    profile = spec.design.build(cfg, link)
    theta_deg, phi_deg = heatmap_axes(spec.resolution_deg)
    th = np.radians(theta_deg)[:, np.newaxis]
    ph = np.radians(phi_deg)[np.newaxis, :]
    d = link.d2
    pts = np.stack(np.broadcast_arrays(d * np.sin(th) * np.cos(ph), d * np.sin(th) * np.sin(ph),
                                       d * np.cos(th)), axis=-1).reshape(-1, 3)
    power = received_power_general_sweep(cfg, profile, link, pts, spec.p_t)
    power = power.reshape(len(theta_deg), len(phi_deg))
    return Heatmap(theta_deg, phi_deg, power, link.d1, d, spec.p_t)


# --- measurements ---------------------------------------------------------------


@dataclass(frozen=True)
class MeasurementRecord:
    d1: float
    d2: float
    received_power_dbm: float
    tag: str = ""

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.d1, self.d2, self.received_power_dbm)):
            raise ScenarioError("measurement values must be finite")
        if not (self.d1 > 0 and self.d2 > 0):
            raise ScenarioError("measurement distances must be positive")


def parse_measurements(text: str, source: str = "<input>") -> list[MeasurementRecord]:
    """Parse measurement CSV text with header ``d1_m,d2_m,pr_dbm,tag``; ``#`` lines are comments."""
    records = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in next(csv.reader([line]))]
        if not header_seen:
            if tuple(cells) != MEASUREMENT_HEADER:
                raise ScenarioError(f"{source}:{lineno}: expected header {','.join(MEASUREMENT_HEADER)}")
            header_seen = True
            continue
        if len(cells) not in (3, 4):
            raise ScenarioError(f"{source}:{lineno}: expected 4 fields, got {len(cells)}")
        try:
            d1, d2, pr = (float(c) for c in cells[:3])
            records.append(MeasurementRecord(d1, d2, pr, cells[3] if len(cells) == 4 else ""))
        except (ValueError, ScenarioError) as exc:
            raise ScenarioError(f"{source}:{lineno}: {exc}") from None
    if not header_seen:
        raise ScenarioError(f"{source}: missing header")
    return records


def read_measurements(path) -> list[MeasurementRecord]:
    return parse_measurements(Path(path).read_text(encoding="utf-8"), str(path))


def write_measurements(records, path=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MEASUREMENT_HEADER)
    for r in records:
        w.writerow([repr(r.d1), repr(r.d2), repr(r.received_power_dbm), r.tag])
    if path is not None:
        Path(path).write_text(buf.getvalue(), encoding="utf-8")
    return buf.getvalue()


@dataclass(frozen=True)
class CalibrationSpec:
    """Composite linear gain folded into model predictions, plus the outlier threshold."""

    gain: float = 1.0
    outlier_threshold_db: float = 5.0

    def __post_init__(self):
        if not (self.gain > 0 and math.isfinite(self.gain)):
            raise ScenarioError("calibration gain must be positive")
        if not self.outlier_threshold_db > 0:
            raise ScenarioError("outlier threshold must be positive")


@dataclass(frozen=True)
class Residual:
    record: MeasurementRecord
    model_dbm: float
    residual_db: float
    outlier: bool


@dataclass
class ResidualReport:
    residuals: list[Residual]
    mean_db: float
    max_abs_db: float

    @property
    def outliers(self) -> list[Residual]:
        return [r for r in self.residuals if r.outlier]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("d1_m", "d2_m", "pr_dbm", "model_dbm", "residual_db", "outlier", "tag"))
        for r in self.residuals:
            rec = r.record
            w.writerow([_fmt(rec.d1), _fmt(rec.d2), _fmt_db(rec.received_power_dbm), _fmt_db(r.model_dbm),
                        _fmt_db(r.residual_db), str(r.outlier).lower(), rec.tag])
        buf.write(f"# mean_residual_db={_fmt_db(self.mean_db)} max_abs_residual_db={_fmt_db(self.max_abs_db)} "
                  f"outliers={len(self.outliers)}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "mean_residual_db": _json_num(self.mean_db),
            "max_abs_residual_db": _json_num(self.max_abs_db),
            "outliers": len(self.outliers),
            "records": [
                {"d1_m": r.record.d1, "d2_m": r.record.d2, "pr_dbm": r.record.received_power_dbm,
                 "model_dbm": _json_num(r.model_dbm), "residual_db": _json_num(r.residual_db),
                 "outlier": r.outlier, "tag": r.record.tag}
                for r in self.residuals
            ],
        }
        return json.dumps(doc, indent=1) + "\n"


def model_prediction_dbm(model: SweepSpec, d1: float, d2: float, cal: CalibrationSpec | None = None) -> float:
    """Model received power in dBm for one (d1, d2) pair, using the spec's first regime."""
    link = model.link.with_tx(replace(model.link.tx, distance=d1)).with_rx(replace(model.link.rx, distance=d2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = evaluate(model.cfg, link, model.design, model.regimes[0], model.p_t)
    gain = 1.0 if cal is None else cal.gain
    p = res.received_power * gain
    return 10.0 * math.log10(p / 1e-3) if p > 0 else -math.inf


def compare_measurements(records: list[MeasurementRecord], model: SweepSpec,
                         cal: CalibrationSpec | None = None) -> ResidualReport:
    """Residuals (measured minus calibrated model) in dB with summary statistics."""
    if not records:
        raise ScenarioError("no measurement records to compare")
    cal = cal or CalibrationSpec()
    out = []
    for rec in records:
        pred = model_prediction_dbm(model, rec.d1, rec.d2, cal)
        res = rec.received_power_dbm - pred
        out.append(Residual(rec, pred, res, not abs(res) <= cal.outlier_threshold_db))
    vals = np.array([r.residual_db for r in out])
    return ResidualReport(out, float(np.mean(vals)), float(np.max(np.abs(vals))))


# --- scenario files -------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    cfg: RisConfig
    link: LinkGeometry
    design: PhaseDesign
    sweep: SweepSpec | None
    calibration: CalibrationSpec


DEFAULT_LINK = {"d1_m": 100.0, "theta_t_deg": 45.0, "phi_t_deg": 180.0,
                "d2_m": 100.0, "theta_r_deg": 45.0, "phi_r_deg": 0.0}


def _section(doc: dict, name: str) -> dict:
    sec = doc.get(name, {})
    if not isinstance(sec, dict):
        raise ScenarioError(f"section {name!r} must be an object")
    return sec


def ris_from_dict(sec: dict) -> RisConfig:
    if "preset" in sec:
        base = ris_preset(sec["preset"])
        over = {k: v for k, v in sec.items() if k != "preset"}
        if "cell_alpha" in over:
            over["cell_pattern"] = CosinePattern(float(over.pop("cell_alpha")))
        return replace(base, **over) if over else base
    try:
        return RisConfig(
            rows=sec["rows"], cols=sec["cols"], dx=float(sec["dx"]), dy=float(sec.get("dy", sec["dx"])),
            amplitude=float(sec.get("amplitude", 1.0)),
            wavelength=sec.get("wavelength"), frequency=sec.get("frequency"),
            cell_pattern=CosinePattern(float(sec.get("cell_alpha", 3.0))),
        )
    except KeyError as exc:
        raise ScenarioError(f"ris section is missing {exc}") from None


def antenna_from_dict(sec: dict, fallback: AntennaSpec) -> AntennaSpec:
    if not sec:
        return fallback
    if "preset" in sec:
        ant = antenna_preset(sec["preset"])
    else:
        try:
            pat = CosinePattern(float(sec["alpha"]))
        except KeyError:
            raise ScenarioError("antenna section needs 'preset' or 'alpha'") from None
        ant = AntennaSpec(pat, float(sec.get("gain", gain_closed_form(pat))))
    if "main_lobe_half_width_deg" in sec:
        ant = replace(ant, main_lobe_half_width=math.radians(float(sec["main_lobe_half_width_deg"])))
    return ant


def link_from_dict(sec: dict, tx_ant: AntennaSpec, rx_ant: AntennaSpec) -> LinkGeometry:
    vals = {**DEFAULT_LINK, **sec}
    unknown = set(vals) - set(DEFAULT_LINK)
    if unknown:
        raise ScenarioError(f"unknown link fields {sorted(unknown)}")
    tx = SphericalPlacement.from_degrees(float(vals["d1_m"]), float(vals["theta_t_deg"]), float(vals["phi_t_deg"]))
    rx = SphericalPlacement.from_degrees(float(vals["d2_m"]), float(vals["theta_r_deg"]), float(vals["phi_r_deg"]))
    return LinkGeometry(tx, rx, tx_ant, rx_ant)


def design_from_dict(sec: dict) -> PhaseDesign:
    if not sec:
        return PhaseDesign()

    def rad(key):
        return math.radians(float(sec[key])) if key in sec else None

    return PhaseDesign(kind=sec.get("kind", "uniform"), theta_des=rad("theta_des_deg"),
                       phi_des=rad("phi_des_deg"), phase=float(sec.get("phase_rad", 0.0)),
                       path=sec.get("path"))


def sweep_from_dict(sec: dict, cfg, link, design) -> SweepSpec | None:
    if not sec:
        return None
    regimes = sec.get("regimes", ["general"])
    if isinstance(regimes, str):
        regimes = [regimes]
    return SweepSpec(
        mode=sec.get("mode", "distance_d2"), cfg=cfg, link=link, design=design,
        p_t=float(sec.get("p_t_w", 1.0)), start=float(sec.get("start_m", 1.0)),
        stop=float(sec.get("stop_m", 100.0)), step=float(sec.get("step_m", 1.0)),
        resolution_deg=float(sec.get("resolution_deg", 1.0)), regimes=tuple(regimes),
    )


def scenario_from_dict(doc: dict, base_dir: Path | None = None) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    known = {"ris", "tx_antenna", "rx_antenna", "link", "sweep", "phase_design", "calibration"}
    unknown = set(doc) - known
    if unknown:
        raise ScenarioError(f"unknown scenario sections {sorted(unknown)}")
    ris_sec = _section(doc, "ris")
    if not ris_sec:
        raise ScenarioError("scenario needs a 'ris' section")
    cfg = ris_from_dict(ris_sec)
    try:
        fallback = default_antenna(ris_sec["preset"]) if "preset" in ris_sec else None
    except KeyError:
        fallback = None
    tx_sec, rx_sec = _section(doc, "tx_antenna"), _section(doc, "rx_antenna")
    if fallback is None and not (tx_sec and rx_sec):
        raise ScenarioError("tx_antenna and rx_antenna are required without a RIS preset")
    tx_ant = antenna_from_dict(tx_sec, fallback)
    rx_ant = antenna_from_dict(rx_sec, fallback)
    link = link_from_dict(_section(doc, "link"), tx_ant, rx_ant)
    design_sec = dict(_section(doc, "phase_design"))
    if design_sec.get("path") and base_dir is not None:
        design_sec["path"] = str(base_dir / design_sec["path"])
    design = design_from_dict(design_sec)
    cal_sec = _section(doc, "calibration")
    cal = CalibrationSpec(gain=float(cal_sec.get("gain", 1.0)),
                          outlier_threshold_db=float(cal_sec.get("outlier_threshold_db", 5.0)))
    sweep = sweep_from_dict(_section(doc, "sweep"), cfg, link, design)
    return Scenario(cfg, link, design, sweep, cal)


def load_scenario(path) -> Scenario:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    return scenario_from_dict(doc, path.parent)
