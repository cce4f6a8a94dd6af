import math

import numpy as np
import pytest

from hyperon_ch.ch_inequality import CHSettings
from hyperon_ch.event_generator import (
    EventSample,
    GeneratorConfig,
    UnderPoweredError,
    analyze_events,
    dilution_factor,
    estimate_joint,
    estimate_marginal,
    export_events,
    generate_events,
    inverse_cdf_cos,
    read_events_csv,
    run_experiment,
    sample_pair,
    write_events_csv,
)
from hyperon_ch.rng import philox_stream

ALPHA = 0.75
SETTINGS = CHSettings.coplanar(math.pi / 4.0)
CONE = math.radians(10.0)


class TestInverseCdf:
    def test_endpoints(self):
        assert inverse_cdf_cos(0.0, ALPHA) == -1.0
        assert inverse_cdf_cos(1.0, ALPHA) == 1.0

    def test_median(self):
        # root of a^2 c^2 + 2 c - a^2 = 0
        assert abs(inverse_cdf_cos(0.5, ALPHA) - 0.2619510834095355) < 1e-15

    def test_isotropic_fallback(self):
        u = np.linspace(0.0, 1.0, 11)
        assert np.allclose(inverse_cdf_cos(u, 0.0), 2.0 * u - 1.0)

    def test_inverts_cdf(self):
        u = np.linspace(0.0, 1.0, 1001)
        c = inverse_cdf_cos(u, ALPHA)
        cdf = (c + 1.0) / 2.0 + ALPHA**2 * (c * c - 1.0) / 4.0
        assert np.max(np.abs(cdf - u)) < 1e-12


class TestSamplePair:
    def test_unit_directions_and_determinism(self):
        n_p, n_pbar = sample_pair(philox_stream(3, 0), ALPHA)
        assert abs(n_p @ n_p - 1.0) < 1e-12
        assert abs(n_pbar @ n_pbar - 1.0) < 1e-12
        again = sample_pair(philox_stream(3, 0), ALPHA)
        assert np.array_equal(n_p, again[0])
        assert np.array_equal(n_pbar, again[1])

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            sample_pair(philox_stream(3, 0), 1.5)

    def test_cosine_distribution_ks(self):
        n = 1_000_000
        events = generate_events(GeneratorConfig(n_events=n, seed=8, alpha=ALPHA))
        c = np.sort(np.sum(events.n_p * events.n_pbar, axis=1))
        cdf = (c + 1.0) / 2.0 + ALPHA**2 * (c * c - 1.0) / 4.0
        steps = np.arange(n) / n
        d_stat = max(np.max(np.abs(steps + 1.0 / n - cdf)), np.max(np.abs(steps - cdf)))
        assert d_stat < 1.63 / math.sqrt(n)


class TestConfigValidation:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            GeneratorConfig(n_events=0)
        with pytest.raises(ValueError):
            GeneratorConfig(n_events=10, alpha=1.5)
        with pytest.raises(ValueError):
            GeneratorConfig(n_events=10, beta=1.0)
        with pytest.raises(ValueError):
            GeneratorConfig(n_events=10, efficiency=0.0)
        with pytest.raises(ValueError):
            GeneratorConfig(n_events=10, cone_half_angle=math.pi / 2.0)

    def test_dilution_factor(self):
        # cap-averaged cosine is (1 + cos delta)/2 per side
        delta = CONE
        grid = np.linspace(0.0, delta, 20001)
        cap_mean = np.trapezoid(np.cos(grid) * np.sin(grid), grid) / np.trapezoid(
            np.sin(grid), grid
        )
        assert abs(dilution_factor(delta) - cap_mean**2) < 1e-8


class TestEstimators:
    def test_uniform_joint_is_quarter(self):
        events = generate_events(GeneratorConfig(n_events=400_000, seed=9, alpha=0.0))
        p, sem = estimate_joint(events, [0, 0, 1], [1, 0, 0], CONE)
        assert abs(p - 0.25) < 3.0 * sem

    def test_joint_matches_closed_form_after_correction(self):
        events = generate_events(GeneratorConfig(n_events=2_000_000, seed=10, alpha=ALPHA))
        kappa = dilution_factor(CONE)
        rng = np.random.default_rng(77)
        for _ in range(20):
            v = rng.normal(size=(2, 3))
            v /= np.linalg.norm(v, axis=1, keepdims=True)
            p_raw, sem = estimate_joint(events, v[0], v[1], CONE)
            m1, _ = estimate_marginal(events, v[0], CONE)
            m2 = 0.5  # singlet antiproton marginal
            corrected = m1 * m2 + (p_raw - m1 * m2) / kappa
            expected = 0.25 * (1.0 + ALPHA**2 * float(v[0] @ v[1]))
            assert abs(corrected - expected) < 3.0 * sem / kappa

    def test_single_synthetic_event(self):
        axis = np.array([0.0, 0.0, 1.0])
        events = EventSample([axis], [axis], [1.0], [1.0], [True])
        d_omega = 2.0 * math.pi * (1.0 - math.cos(CONE))
        p, _ = estimate_joint(events, axis, axis, CONE)
        assert abs(p - 4.0 * math.pi**2 / d_omega**2) < 1e-9
        pm, _ = estimate_marginal(events, axis, CONE)
        assert abs(pm - 2.0 * math.pi / d_omega) < 1e-12

    def test_marginal_is_half(self):
        events = generate_events(GeneratorConfig(n_events=400_000, seed=11, alpha=ALPHA))
        for axis in ([0, 0, 1], [0, 1, 0]):
            p, sem = estimate_marginal(events, axis, CONE)
            assert abs(p - 0.5) < 3.0 * sem

    def test_marginal_is_half_for_uniform_events(self):
        events = generate_events(GeneratorConfig(n_events=400_000, seed=12, alpha=0.0))
        p, sem = estimate_marginal(events, [1, 0, 0], CONE)
        assert abs(p - 0.5) < 3.0 * sem

    def test_rejects_empty_and_bad_cone(self):
        empty = EventSample(
            np.empty((0, 3)), np.empty((0, 3)), np.empty(0), np.empty(0), np.empty(0, bool)
        )
        with pytest.raises(ValueError):
            estimate_joint(empty, [0, 0, 1], [0, 0, 1], CONE)
        events = generate_events(GeneratorConfig(n_events=10, seed=1))
        with pytest.raises(ValueError):
            estimate_joint(events, [0, 0, 1], [0, 0, 1], math.pi / 3.0)


class TestRunExperiment:
    def test_deterministic(self):
        cfg = GeneratorConfig(n_events=120_000, seed=21)
        a = run_experiment(cfg, SETTINGS)
        b = run_experiment(cfg, SETTINGS)
        assert a.value == b.value
        assert a.stderr == b.stderr
        assert a.z_score == b.z_score
        assert np.array_equal(a.counts, b.counts)

    def test_thread_count_does_not_change_result(self):
        cfg = GeneratorConfig(n_events=2_300_000, seed=22)
        a = run_experiment(cfg, SETTINGS, threads=1)
        b = run_experiment(cfg, SETTINGS, threads=4)
        assert np.array_equal(a.counts, b.counts)
        assert a.value == b.value

    def test_violation_detected(self):
        cfg = GeneratorConfig(n_events=2_000_000, seed=23, alpha=ALPHA)
        est = run_experiment(cfg, SETTINGS)
        target = ALPHA**2 * (math.sqrt(2.0) / 2.0 - 0.5)
        assert abs(est.value - target) < 3.0 * est.stderr
        assert est.z_score > 1.0
        assert est.n_used == cfg.n_events

    def test_degenerate_alpha_zero(self):
        # bounds collapse to a = b = 1/2; quantum and classical coincide at 0
        cfg = GeneratorConfig(n_events=1_000_000, seed=24, alpha=0.0)
        est = run_experiment(cfg, SETTINGS)
        assert abs(est.value) < 3.0 * est.stderr

    def test_efficiency_thinning_unbiased(self):
        full = run_experiment(GeneratorConfig(n_events=600_000, seed=25), SETTINGS)
        thinned = run_experiment(
            GeneratorConfig(n_events=600_000, seed=25, efficiency=0.1), SETTINGS
        )
        assert 50_000 < thinned.n_used < 70_000
        combined = math.hypot(full.stderr, thinned.stderr)
        assert abs(full.value - thinned.value) < 3.0 * combined

    def test_under_powered(self):
        with pytest.raises(UnderPoweredError):
            run_experiment(GeneratorConfig(n_events=5_000, seed=26), SETTINGS)

    def test_spacelike_only_reduces_sample(self):
        cfg = GeneratorConfig(n_events=200_000, seed=27, spacelike_only=True)
        est = run_experiment(cfg, SETTINGS)
        # surviving fraction should sit near beta = 0.664
        frac = est.n_used / cfg.n_events
        assert abs(frac - 0.664) < 0.01


class TestEventSample:
    def test_record_and_len(self):
        events = generate_events(GeneratorConfig(n_events=1_000, seed=31))
        assert len(events) == 1_000
        rec = events.record(5)
        assert rec.n_p.shape == (3,)
        assert rec.x1 > 0.0 and rec.x2 > 0.0
        assert isinstance(rec.spacelike, bool)

    def test_spacelike_flag_consistent(self):
        events = generate_events(GeneratorConfig(n_events=20_000, seed=32, beta=0.664))
        k = 1.664 / 0.336
        expected = (events.x1 <= k * events.x2) & (events.x2 <= k * events.x1)
        assert np.array_equal(events.spacelike, expected)

    def test_filtered(self):
        events = generate_events(GeneratorConfig(n_events=5_000, seed=33))
        sub = events.filtered(events.spacelike)
        assert len(sub) == int(np.count_nonzero(events.spacelike))
        assert np.all(sub.spacelike)

    def test_column_length_mismatch(self):
        with pytest.raises(ValueError):
            EventSample(np.zeros((3, 3)), np.zeros((3, 3)), [1.0], [1.0, 2.0, 3.0], [True] * 3)


class TestCsvRoundTrip:
    def test_write_read_bit_exact(self, tmp_path):
        events = generate_events(GeneratorConfig(n_events=2_000, seed=41, efficiency=0.8))
        path = tmp_path / "events.csv"
        write_events_csv(events, path)
        back = read_events_csv(path)
        assert np.array_equal(back.n_p, events.n_p)
        assert np.array_equal(back.n_pbar, events.n_pbar)
        assert np.array_equal(back.x1, events.x1)
        assert np.array_equal(back.x2, events.x2)
        assert np.array_equal(back.spacelike, events.spacelike)

    def test_header_checked(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError, match="header"):
            read_events_csv(path)

    def test_export_matches_generate(self, tmp_path):
        cfg = GeneratorConfig(n_events=3_000, seed=42, efficiency=0.5)
        streamed = tmp_path / "streamed.csv"
        total = export_events(cfg, streamed)
        materialized = tmp_path / "materialized.csv"
        write_events_csv(generate_events(cfg), materialized)
        assert streamed.read_text() == materialized.read_text()
        assert total == len(generate_events(cfg))

    def test_reanalysis_reproduces_run(self, tmp_path):
        cfg = GeneratorConfig(n_events=60_000, seed=43)
        direct = run_experiment(cfg, SETTINGS)
        path = tmp_path / "events.csv"
        export_events(cfg, path)
        again = analyze_events(read_events_csv(path), SETTINGS, cfg.alpha, cfg.cone_half_angle)
        assert np.array_equal(direct.counts, again.counts)
        assert direct.value == again.value
        assert direct.stderr == again.stderr

    def test_reanalysis_spacelike_filter(self, tmp_path):
        cfg = GeneratorConfig(n_events=60_000, seed=44, spacelike_only=True)
        direct = run_experiment(cfg, SETTINGS)
        unfiltered_cfg = GeneratorConfig(n_events=60_000, seed=44)
        path = tmp_path / "events.csv"
        export_events(unfiltered_cfg, path)
        again = analyze_events(
            read_events_csv(path), SETTINGS, cfg.alpha, cfg.cone_half_angle, spacelike_only=True
        )
        assert np.array_equal(direct.counts, again.counts)
