"""Acceptance gate: one pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py`` (the lines are printed in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import math
import sys
import time
import warnings
from collections import OrderedDict

import numpy as np
import pytest

from conftest import make_link, random_scenario
from rispl.geometry import SphericalPlacement
from rispl.pathloss import (
    array_factor,
    classic_boundary,
    pathloss_farfield_beam,
    pathloss_nearfield_broadcast,
    received_power_farfield,
    received_power_general,
    received_power_nearfield_beam_max,
    received_power_nearfield_broadcast,
    redefined_boundary,
)
from rispl.radiation import CosinePattern, gain_from_pattern, to_db
from rispl.ris import PhaseProfile, RisConfig, nearfield_focus_codebook, power_consumption, uniform_profile
from rispl.scenario import PhaseDesign, SweepSpec, run_angular_heatmap

import oracles

TITLES = OrderedDict([
    ("1", "gain closed forms"),
    ("2", "field boundaries"),
    ("3", "specular heatmap argmax"),
    ("4", "intelligent-reflection heatmap argmax"),
    ("5", "regime agreement"),
    ("6", "reciprocity"),
    ("7", "array-factor oracle"),
    ("8", "codebook optimality"),
    ("9", "scaling laws"),
    ("10", "two-beam stripe"),
    ("11", "power consumption"),
    ("M", "measurement comparison closed loop"),
])
_RESULTS: "OrderedDict[str, list[tuple[str, bool, str]]]" = OrderedDict()


def record(cid: str, part: str, ok: bool, detail: str) -> bool:
    _RESULTS.setdefault(cid, []).append((part, bool(ok), detail))
    return bool(ok)


def report_lines() -> list[str]:
    lines = []
    for cid, title in TITLES.items():
        parts = _RESULTS.get(cid)
        if not parts:
            continue
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{name}: {'ok' if good else 'FAIL'} ({d})" for name, good, d in parts)
        lines.append(f"[{'PASS' if ok else 'FAIL'}] criterion {cid} {title}: {detail}")
    return lines


def db(x):
    return 10 * math.log10(x)


def heat(cfg, link, design, res=1.0):
    spec = SweepSpec("angular_heatmap", cfg, link, design=design, resolution_deg=res)
    return run_angular_heatmap(spec)


def angular_error(found, want):
    dth = abs(found[0] - want[0])
    dph = abs((found[1] - want[1] + 180) % 360 - 180)
    return dth, dph


def test_c1_gains():
    t0 = time.perf_counter()
    gains = {a: gain_from_pattern(CosinePattern(a)) for a in (3, 62, 13)}
    elapsed = time.perf_counter() - t0
    ok = True
    for alpha, lin, dbi in ((3, 8, 9.03), (62, 126, 21.0), (13, 28, 14.5)):
        g = gains[alpha]
        good = abs(g - lin) <= 1e-6 * lin and abs(float(to_db(g)) - dbi) < 0.05
        ok &= record("1", f"alpha={alpha}", good, f"{g:.6f} = {float(to_db(g)):.3f} dB")
    ok &= record("1", "runtime", elapsed < 1.0, f"{elapsed:.3f} s")
    assert ok


def test_c2_boundaries(large1, large2, small):
    ok = True
    for name, cfg, classic, lb in (("large RIS1", large1, 71.4, 28.77), ("large RIS2", large2, 11.9, 4.8),
                                   ("small RIS", small, 1.0, 0.866)):
        c = classic_boundary(cfg)
        b = redefined_boundary(cfg, math.pi / 4, math.pi / 4)
        ok &= record("2", name, abs(c - classic) < 0.1 and abs(b - lb) < 0.01,
                     f"classic {c:.3f} m, L_bound {b:.4f} m")
    assert ok


def test_c3_specular_large(large1, horn_x):
    t0 = time.perf_counter()
    hm = heat(large1, make_link(100, 100, horn_x), PhaseDesign())
    elapsed = time.perf_counter() - t0
    peak = hm.argmax
    dth, dph = angular_error(peak, (45, 0))
    ok = record("3", "large RIS1", dth <= 1 and dph <= 1, f"peak ({peak[0]:.0f}, {peak[1]:.0f}) deg")
    ok &= record("3", "runtime", elapsed < 60, f"{elapsed:.1f} s for {hm.power.size} directions")
    assert ok


def test_c3_specular_small(small, horn_c):
    hm = heat(small, make_link(3.5, 10, horn_c), PhaseDesign())
    peak = hm.argmax
    dth, dph = angular_error(peak, (45, 0))
    assert record("3", "small RIS", dth <= 1 and dph <= 1, f"peak ({peak[0]:.0f}, {peak[1]:.0f}) deg")


@pytest.mark.parametrize("which", ["large", "small"])
def test_c4_intelligent(which, large1, small, horn_x, horn_c):
    if which == "large":
        cfg, link, want = large1, make_link(100, 100, horn_x), (60, 315)
    else:
        cfg, link, want = small, make_link(3.5, 10, horn_c), (30, 0)
    design = PhaseDesign("farfield", math.radians(want[0]), math.radians(want[1]))
    peak = heat(cfg, link, design).argmax
    dth, dph = angular_error(peak, want)
    assert record("4", f"{which} RIS to {want}", dth <= 1 and dph <= 1,
                  f"peak ({peak[0]:.0f}, {peak[1]:.0f}) deg")


def test_c5_farfield_agreement(small, horn_c):
    lb = redefined_boundary(small, math.pi / 4, math.pi / 4)
    worst = 0.0
    for k1 in (10, 20, 50):
        for k2 in (10, 20, 50):
            link = make_link(k1 * lb, k2 * lb, horn_c)
            gen = received_power_general(small, uniform_profile(small), link).received_power
            ff = received_power_farfield(small, link).received_power
            worst = max(worst, abs(db(gen) - db(ff)))
    assert record("5", "small RIS far field", worst < 0.5, f"max gap {worst:.3f} dB")


def test_c5_broadcast_agreement(large1, horn_x):
    worst, where, uncovered = 0.0, None, 0
    for d1 in (1.0, 2.0, 3.5):
        for d2 in np.arange(5.0, 100.0 + 1e-9, 1.0):
            link = make_link(d1, float(d2), horn_x)
            bc = received_power_nearfield_broadcast(large1, link)
            if not bc.in_coverage:
                uncovered += 1
                continue
            gen = received_power_general(large1, uniform_profile(large1), link).received_power
            gap = abs(db(gen) - db(bc.received_power))
            if gap > worst:
                worst, where = gap, (d1, float(d2))
    assert record("5", "large RIS1 broadcast", worst < 1.5 and uncovered == 0,
                  f"max gap {worst:.3f} dB at d1={where[0]} m, d2={where[1]:.0f} m")


def test_c5_crossover(large1, horn_x):
    link = make_link(28.77, 100, horn_x)
    gap = abs(db(pathloss_farfield_beam(large1, link)) - db(pathloss_nearfield_broadcast(large1, link)))
    assert record("5", "crossover at d1=28.77 m", gap < 0.5, f"gap {gap:.3f} dB")


def test_c6_reciprocity():
    rng = np.random.default_rng(6)
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for _ in range(200):
            cfg, prof, link = random_scenario(rng)
            a = received_power_general(cfg, prof, link).received_power
            b = received_power_general(cfg, prof, link.swapped()).received_power
            worst = max(worst, abs(b - a) / a)
    assert record("6", "200 scenarios", worst < 1e-12, f"max relative difference {worst:.2e}")


def test_c7_array_factor():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        rows, cols = (int(v) for v in 2 * rng.integers(1, 9, size=2))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cfg = RisConfig(rows, cols, float(rng.uniform(0.005, 0.02)), float(rng.uniform(0.005, 0.02)),
                            wavelength=0.04)
        th_t, th_r = rng.uniform(0, math.pi / 2, 2)
        ph_t, ph_r = rng.uniform(0, 2 * math.pi, 2)
        d1, d2 = rng.uniform(-1, 1, 2)
        k = cfg.wavenumber
        u = k * (math.sin(th_t) * math.cos(ph_t) + math.sin(th_r) * math.cos(ph_r) + d1) * cfg.dx
        v = k * (math.sin(th_t) * math.sin(ph_t) + math.sin(th_r) * math.sin(ph_r) + d2) * cfg.dy
        want = oracles.geometric_sum(rows, cols, u, v)
        got = array_factor(cfg, th_t, ph_t, th_r, ph_r, d1, d2)
        worst = max(worst, abs(got - want) / abs(want))
    assert record("7", "100 tuples", worst < 1e-9, f"max relative error {worst:.2e}")


def test_c8_codebook_optimality(horn_c):
    cfg = RisConfig(8, 8, 0.012, 0.012, amplitude=0.7, wavelength=0.07)
    link = make_link(0.5, 0.8, horn_c, theta_r=math.pi / 6, phi_r=0.3)
    best = received_power_general(cfg, nearfield_focus_codebook(cfg, link.tx_point, link.rx_point), link)
    bound = received_power_nearfield_beam_max(cfg, link).received_power
    rng = np.random.default_rng(8)
    beaten = 0
    top = 0.0
    for _ in range(1000):
        p = received_power_general(cfg, PhaseProfile(rng.uniform(0, 2 * math.pi, cfg.shape)), link).received_power
        top = max(top, p)
        beaten += p >= best.received_power
    rel = abs(best.received_power - bound) / bound
    ok = record("8", "dominance", beaten == 0, f"best random at {db(top / best.received_power):.2f} dB")
    ok &= record("8", "equals bound", rel < 1e-10, f"relative difference {rel:.1e}")
    assert ok


def test_c9_scaling(large1, horn_x):
    want = 10 * math.log10(0.25)
    ff = [received_power_farfield(large1, make_link(100, d2, horn_x)).received_power for d2 in (100, 200)]
    bc = [received_power_nearfield_broadcast(large1, make_link(d1, d2, horn_x)).received_power
          for d1, d2 in ((1, 4), (2, 8))]
    e_ff = abs(db(ff[1] / ff[0]) - want)
    e_bc = abs(db(bc[1] / bc[0]) - want)
    ok = record("9", "far field d2 doubling", e_ff < 1e-6, f"error {e_ff:.1e} dB")
    ok &= record("9", "broadcast (d1+d2) doubling", e_bc < 1e-6, f"error {e_bc:.1e} dB")
    assert ok


def test_c10_stripe(large2, horn_x):
    link = make_link(1, 100, horn_x, theta_t=0.0, phi_t=0.0)
    hm = heat(large2, link, PhaseDesign("stripe"))
    peaks = hm.local_maxima(floor_db=-3.0)
    found = []
    for want in ((45, 0), (45, 180)):
        near = [p for p in peaks if max(angular_error(p, want)) <= 2]
        found.append(near[0] if near else None)
    desc = ", ".join("none" if f is None else f"({f[0]:.0f}, {f[1]:.0f})" for f in found)
    assert record("10", "two maxima", all(found), f"maxima near targets: {desc}")


def test_c11_power_consumption():
    w = power_consumption("pin", 1700)
    assert record("11", "pin 1700 cells", w == 0.561, f"{w!r} W")


def test_measurement_closed_loop(large2, horn_x):
    from rispl.scenario import MeasurementRecord, compare_measurements, model_prediction_dbm

    model = SweepSpec("distance_d2", large2, make_link(1, 2, horn_x),
                      design=PhaseDesign("nearfield_broadcast", math.pi / 4, 0.0), regimes=("general",))
    pairs = [(1.0, d2) for d2 in (1.5, 2.0, 3.0, 4.0)]
    exact = [MeasurementRecord(a, b, model_prediction_dbm(model, a, b), "syn") for a, b in pairs]
    shifted = [MeasurementRecord(r.d1, r.d2, r.received_power_dbm + 3.0, "shift") for r in exact]
    zero = compare_measurements(exact, model)
    off = compare_measurements(shifted, model)
    ok = record("M", "zero residual", zero.max_abs_db == 0.0, f"max |residual| {zero.max_abs_db:.1e} dB")
    ok &= record("M", "+3 dB recovery", abs(off.mean_db - 3.0) < 1e-9, f"mean {off.mean_db:.12f} dB")
    assert ok


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
