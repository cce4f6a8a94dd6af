"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line.  Run with `pytest tests/test_acceptance.py -v -s`.

Statistical criteria use frozen seeds and are fully deterministic; the
expected values come from independent oracles computed inline (polynomial
roots, fine-grid scans, closed-form arithmetic), never from the code path
under test.
"""

import json
import math
import time

import numpy as np
import pytest

from hyperon_ch.ch_inequality import (
    Bounds,
    CHSettings,
    ch_functional,
    coplanar_lhs,
    quantum_table,
    scalar_ch,
    violation_region,
)
from hyperon_ch.cli import main as cli_main
from hyperon_ch.event_generator import GeneratorConfig, run_experiment
from hyperon_ch.lhv_models import MODEL_NAMES, bundled_model, verify_ch
from hyperon_ch.quantum_model import DecayParams, joint_probability, singlet_state
from hyperon_ch.spacelike import critical_beta, mixed_bound, spacelike_fraction_mc

ALPHA = 0.75
MAX_VIOLATION = ALPHA**2 * (math.sqrt(2.0) / 2.0 - 0.5)  # 0.116497564417433


def report(number: int, description: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f"  [{detail}]" if detail else ""
    print(f"{status}: criterion {number} - {description}{suffix}")
    assert ok, f"criterion {number} failed: {description}{suffix}"


def test_criterion_1_maximal_violation_analytic():
    settings = CHSettings.coplanar(math.pi / 4.0)
    bounds = Bounds.symmetric(ALPHA)

    def evaluate() -> float:
        return ch_functional(quantum_table(settings, ALPHA), bounds)

    value = evaluate()  # warm-up
    runtime = math.inf
    for _ in range(50):
        t0 = time.perf_counter()
        evaluate()
        runtime = min(runtime, time.perf_counter() - t0)
    ok = abs(value - MAX_VIOLATION) < 1e-9 and runtime < 1e-3
    report(
        1,
        "maximal violation at theta=pi/4 equals alpha^2(sqrt2/2 - 1/2) within 1e-9, < 1 ms",
        ok,
        f"value={value:.12f} runtime={runtime * 1e6:.1f}us",
    )


def test_criterion_2_violation_curve_and_sign_change():
    thetas_deg = np.arange(0.0, 91.0)
    values = coplanar_lhs(np.radians(thetas_deg), ALPHA)
    direct = np.array(
        [
            ALPHA**2 * ((3.0 * math.cos(t) - math.cos(3.0 * t)) / 4.0 - 0.5)
            for t in np.radians(thetas_deg)
        ]
    )
    max_dev = float(np.max(np.abs(values - direct)))

    # independent oracle: positivity ends at the root of 2c^3 - 3c + 1 = 0
    roots = np.roots([2.0, 0.0, -3.0, 1.0])
    c_star = min(r.real for r in roots if abs(r.imag) < 1e-12 and 0.0 < r.real < 1.0)
    theta_star = math.degrees(math.acos(c_star))  # 68.5293 degrees

    lo, hi = violation_region(ALPHA, 0.0)
    region_ok = lo == 0.0 and abs(math.degrees(hi) - theta_star) < 0.01
    sign_ok = all(
        (values[i] > 0.0) == (0.0 < thetas_deg[i] < theta_star) for i in range(len(thetas_deg))
    )
    ok = max_dev < 1e-12 and region_ok and sign_ok
    report(
        2,
        "coplanar curve matches direct substitution (1e-12); positive exactly on (0, 68.53) deg",
        ok,
        f"max_dev={max_dev:.2e} upper_root={math.degrees(hi):.4f}deg",
    )


def test_criterion_3_mixed_bound_region():
    bound = mixed_bound(ALPHA, 0.664)
    lo, hi = violation_region(ALPHA, bound)

    # independent oracle: fine-grid scan at 0.0005 degree resolution
    grid = np.radians(np.arange(0.0005, 90.0, 0.0005))
    exceed = coplanar_lhs(grid, ALPHA) > bound
    scan_lo = math.degrees(grid[exceed][0])
    scan_hi = math.degrees(grid[exceed][-1])

    ok = abs(math.degrees(lo) - scan_lo) < 0.1 and abs(math.degrees(hi) - scan_hi) < 0.1
    report(
        3,
        "mixed-bound violation region matches fine-grid scan within 0.1 deg",
        ok,
        f"region=({math.degrees(lo):.3f}, {math.degrees(hi):.3f}) "
        f"scan=({scan_lo:.3f}, {scan_hi:.3f})",
    )


def test_criterion_4_critical_velocity_identity():
    bc = critical_beta()
    worst = max(
        abs(mixed_bound(float(a), bc) - float(a) ** 2 * (math.sqrt(2.0) / 2.0 - 0.5))
        for a in np.arange(0.0, 1.0 + 1e-12, 0.01)
    )
    ok = worst < 1e-12
    report(
        4,
        "mixed bound at beta = 2 - sqrt(2) equals the quantum peak for every alpha",
        ok,
        f"worst_dev={worst:.2e}",
    )


def test_criterion_5_spacelike_fraction():
    t0 = time.perf_counter()
    details = []
    ok = True
    for beta in (0.2, 0.586, 0.664, 0.9):
        est, sem = spacelike_fraction_mc(beta, 1_000_000, seed=606)
        ok = ok and abs(est - beta) < 3.0 * sem
        details.append(f"beta={beta}: {est:.4f}+-{sem:.4f}")
    runtime = time.perf_counter() - t0
    ok = ok and runtime < 5.0
    report(
        5,
        "MC space-like fraction equals beta within 3 sigma at n=1e6, < 5 s",
        ok,
        "; ".join(details) + f"; runtime={runtime:.2f}s",
    )


def test_criterion_6_lhv_bound_property_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6006)
    violations = 0
    checked = 0
    for name in MODEL_NAMES:
        model = bundled_model(name, ALPHA)
        for seed in (1, 2, 3):
            for _ in range(100):
                v = rng.normal(size=(4, 3))
                v /= np.linalg.norm(v, axis=1, keepdims=True)
                value, sem = verify_ch(model, CHSettings(*v), 20_000, seed=seed)
                checked += 1
                if value > 3.0 * sem:
                    violations += 1
    models_ok = violations == 0

    box_rng = np.random.default_rng(7007)
    scalar_ok = True
    corner_worst = 0.0
    total_points = 0
    while total_points < 1_000_000:
        lo1, hi1 = np.sort(box_rng.random(2))
        lo2, hi2 = np.sort(box_rng.random(2))
        b = Bounds(lo1, hi1, lo2, hi2)
        x1, x2 = lo1 + box_rng.random((2, 50_000)) * (hi1 - lo1)
        y1, y2 = lo2 + box_rng.random((2, 50_000)) * (hi2 - lo2)
        scalar_ok = scalar_ok and float(np.max(scalar_ch(x1, x2, y1, y2, b))) <= 1e-12
        corners = [
            scalar_ch(cx1, cx2, cy1, cy2, b)
            for cx1 in (lo1, hi1)
            for cx2 in (lo1, hi1)
            for cy1 in (lo2, hi2)
            for cy2 in (lo2, hi2)
        ]
        corner_worst = max(corner_worst, abs(max(corners)))
        total_points += 50_000
    runtime = time.perf_counter() - t0
    ok = models_ok and scalar_ok and corner_worst < 1e-12 and runtime < 60.0
    report(
        6,
        "all LHV models stay below 3 sigma over 300 settings; scalar form <= 0 on 1e6 box points",
        ok,
        f"violations={violations}/{checked} corner_worst={corner_worst:.2e} runtime={runtime:.1f}s",
    )


def test_criterion_7_end_to_end_experiment():
    t0 = time.perf_counter()
    config = GeneratorConfig(n_events=10_000_000, seed=6, alpha=ALPHA, beta=0.664)
    estimate = run_experiment(config, CHSettings.coplanar(math.pi / 4.0))
    runtime = time.perf_counter() - t0
    ok = (
        abs(estimate.value - MAX_VIOLATION) < 3.0 * estimate.stderr
        and estimate.z_score > 5.0
        and runtime < 60.0
    )
    report(
        7,
        "1e7-event experiment reproduces the quantum value within 3 sigma with z > 5, < 60 s",
        ok,
        f"value={estimate.value:.6f}+-{estimate.stderr:.6f} z={estimate.z_score:.2f} "
        f"runtime={runtime:.1f}s",
    )


def test_criterion_8_trace_vs_closed_form():
    state = singlet_state()
    params = DecayParams.cp_conserving(ALPHA)
    rng = np.random.default_rng(8008)
    v = rng.normal(size=(10_000, 2, 3))
    v /= np.linalg.norm(v, axis=2, keepdims=True)
    worst = max(
        abs(joint_probability(state, n1, n2, params) - 0.25 * (1.0 + ALPHA**2 * float(n1 @ n2)))
        for n1, n2 in v
    )
    ok = worst < 1e-12
    report(
        8,
        "trace-based joint probability matches (1 + alpha^2 n1.n2)/4 on 1e4 pairs",
        ok,
        f"max_abs_dev={worst:.2e}",
    )


def test_criterion_9_yield_arithmetic(capsys):
    code = cli_main(["yield", "--n-parent", "1e8", "--br1", "1.09e-3", "--br2", "0.639",
                     "--efficiency", "1.0"])
    out = capsys.readouterr().out
    with capsys.disabled():
        expected = json.loads(out)["result"]["expected_pairs"]
        ok = code == 0 and 4.0e4 <= expected <= 4.9e4
        report(
            9,
            "expected usable pairs from 1e8 parents lands in [4.0e4, 4.9e4]",
            ok,
            f"expected_pairs={expected:.1f}",
        )


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
