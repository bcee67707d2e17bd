"""Estimator simulations: statistics, determinism, and the bound law."""
import numpy as np
import pytest

from qcrb.estimators import (
    DEFAULT_TRIALS,
    EstimatorKind,
    ExperimentConfig,
    run_experiment,
    run_heterodyne,
    run_photon_counting,
    run_two_detector,
    sample_mode_amplitudes,
    simulate_trials,
)
from qcrb.fisher import bound_report
from qcrb.physics import SourceSpec
from qcrb.rng import substream
from qcrb.stats import bootstrap_sigma

SEED = 424242


def make_spec(n0, modes=100):
    return SourceSpec.from_occupation(
        n0=n0, nu0=1e6, delta_nu=float(modes), T_obs=1.0
    )


def make_cfg(n0, kind, trials=20_000, modes=100, seed=SEED):
    return ExperimentConfig(
        spec=make_spec(n0, modes), kind=kind, trials=trials, master_seed=seed
    )


class TestModeAmplitudes:
    def test_first_and_second_and_fourth_moments(self):
        n0 = 3.0
        spec = make_spec(n0, modes=100)
        rng = substream(SEED, purpose=7, index=0)
        draws = np.concatenate(
            [sample_mode_amplitudes(spec, rng) for _ in range(1000)]
        )
        se = np.std(draws.real) / np.sqrt(draws.size)
        assert abs(draws.real.mean()) < 4 * se
        assert abs(draws.imag.mean()) < 4 * se

        power = np.abs(draws) ** 2
        boot = substream(SEED, purpose=7, index=1)
        sig2 = bootstrap_sigma(power, lambda m: m.mean(axis=1), boot)
        assert abs(power.mean() - n0) < 3 * sig2

        quartic = power**2
        sig4 = bootstrap_sigma(quartic, lambda m: m.mean(axis=1), boot)
        assert abs(quartic.mean() - 2 * n0**2) < 3 * sig4


class TestPhotonCounting:
    def test_attains_quantum_floor(self):
        cfg = make_cfg(10.0, EstimatorKind.PHOTON_COUNTING)
        report = run_photon_counting(cfg)
        target = 11.0 / (10.0 * 100.0)
        assert abs(report.rel_sensitivity - target) < 3 * report.bootstrap_sigma
        assert abs(report.ratio_to_bound - 1.0) < 3 * report.bootstrap_sigma / report.bound
        assert report.bound_satisfied

    def test_unbiased(self):
        report = run_photon_counting(make_cfg(10.0, EstimatorKind.PHOTON_COUNTING))
        assert abs(report.bias) < 3 * report.bootstrap_sigma_mean
        assert report.bias_consistent

    def test_sampling_paths_agree_in_distribution(self):
        # Bose-Einstein counts versus Poisson counts conditioned on a
        # thermal intensity: first four moments from matched sample sizes
        n0, size = 3.0, 120_000
        rng_a = substream(SEED, purpose=7, index=2)
        direct = rng_a.geometric(1.0 / (n0 + 1.0), size=size) - 1
        rng_b = substream(SEED, purpose=7, index=3)
        x = rng_b.normal(0.0, np.sqrt(n0 / 2.0), size=(2, size))
        conditional = rng_b.poisson(x[0] ** 2 + x[1] ** 2)
        boot = substream(SEED, purpose=7, index=4)
        for order in (1, 2, 3, 4):
            ma = (direct.astype(float) ** order)
            mb = (conditional.astype(float) ** order)
            sig_a = bootstrap_sigma(ma, lambda m: m.mean(axis=1), boot)
            sig_b = bootstrap_sigma(mb, lambda m: m.mean(axis=1), boot)
            combined = np.hypot(sig_a, sig_b)
            assert abs(ma.mean() - mb.mean()) < 3 * combined

    def test_conditional_poisson_report_matches_direct(self):
        cfg = make_cfg(3.0, EstimatorKind.PHOTON_COUNTING)
        direct = run_photon_counting(cfg)
        conditional = run_photon_counting(cfg, sampling="conditional_poisson")
        combined = np.hypot(direct.bootstrap_sigma, conditional.bootstrap_sigma)
        assert abs(direct.rel_sensitivity - conditional.rel_sensitivity) < 3 * combined


class TestHeterodyne:
    def test_high_occupation_approaches_radiometer_equation(self):
        report = run_heterodyne(make_cfg(100.0, EstimatorKind.HETERODYNE_RADIOMETER))
        target = (101.0 / 100.0) ** 2 / 100.0
        assert abs(report.rel_sensitivity - target) < 3 * report.bootstrap_sigma

    def test_unit_occupation_pays_factor_two(self):
        report = run_heterodyne(make_cfg(1.0, EstimatorKind.HETERODYNE_RADIOMETER))
        sigma_ratio = report.bootstrap_sigma / report.bound
        assert abs(report.ratio_to_bound - 2.0) < 3 * sigma_ratio
        assert report.bound_satisfied

    def test_unbiased(self):
        report = run_heterodyne(make_cfg(1.0, EstimatorKind.HETERODYNE_RADIOMETER))
        assert abs(report.bias) < 3 * report.bootstrap_sigma_mean

    def test_ratio_to_bound_decreases_toward_one(self):
        measured, expected, sigmas = [], [], []
        for n0 in (1.0, 10.0, 100.0, 1000.0):
            report = run_heterodyne(make_cfg(n0, EstimatorKind.HETERODYNE_RADIOMETER))
            measured.append(report.ratio_to_bound)
            expected.append((n0 + 1.0) / n0)
            sigmas.append(report.bootstrap_sigma / report.bound)
        assert np.all(np.diff(expected) < 0)
        for got, want, sig in zip(measured, expected, sigmas):
            assert abs(got - want) < 3 * sig


class TestTwoDetector:
    def test_pair_product_mean(self):
        n0 = 10.0
        cfg = make_cfg(n0, EstimatorKind.TWO_DETECTOR_CORRELATION, trials=10_000)
        batch = simulate_trials(cfg)
        boot = substream(SEED, purpose=7, index=5)
        sig = bootstrap_sigma(batch.raw, lambda m: m.mean(axis=1), boot)
        assert abs(batch.raw.mean() - n0**2 / 2.0) < 3 * sig

    def test_stays_above_bound(self):
        for n0 in (1.0, 10.0, 100.0):
            report = run_two_detector(
                make_cfg(n0, EstimatorKind.TWO_DETECTOR_CORRELATION)
            )
            assert report.rel_sensitivity >= report.bound - 3 * report.bootstrap_sigma
            assert report.bound_satisfied

    def test_bias_diagnostic_predicts_measured_bias(self):
        report = run_two_detector(
            make_cfg(10.0, EstimatorKind.TWO_DETECTOR_CORRELATION, trials=50_000)
        )
        assert report.bias_diagnostic is not None
        assert report.bias < 0  # square root is concave
        assert report.bias == pytest.approx(report.bias_diagnostic, rel=0.5)
        assert report.bias_consistent is None

    def test_vanishing_occupation_limit(self):
        cfg = ExperimentConfig(
            spec=make_spec(1e-3, modes=100),
            kind=EstimatorKind.TWO_DETECTOR_CORRELATION,
            trials=1000,
            master_seed=SEED,
        )
        report = run_two_detector(cfg)
        assert report.mean_estimate < 1e-2


class TestHarness:
    def test_reports_are_bit_reproducible(self):
        cfg = make_cfg(2.0, EstimatorKind.PHOTON_COUNTING, trials=5000)
        assert run_experiment(cfg) == run_experiment(cfg)

    def test_worker_count_never_changes_outputs(self):
        cfg = make_cfg(2.0, EstimatorKind.TWO_DETECTOR_CORRELATION, trials=5000)
        assert run_experiment(cfg, workers=1) == run_experiment(cfg, workers=3)

    def test_trials_floor_enforced(self):
        with pytest.raises(ValueError):
            make_cfg(1.0, EstimatorKind.PHOTON_COUNTING, trials=999)

    def test_kind_dispatch_and_mismatch(self):
        cfg = make_cfg(1.0, EstimatorKind.HETERODYNE_RADIOMETER, trials=1000)
        with pytest.raises(ValueError):
            run_photon_counting(cfg)
        assert run_experiment(cfg).kind == "heterodyne_radiometer"

    def test_kind_accepts_plain_strings(self):
        cfg = ExperimentConfig(
            spec=make_spec(1.0), kind="photon_counting", trials=1000, master_seed=1
        )
        assert cfg.kind is EstimatorKind.PHOTON_COUNTING

    def test_report_bound_matches_bound_report(self):
        cfg = make_cfg(5.0, EstimatorKind.PHOTON_COUNTING, trials=2000)
        report = run_experiment(cfg)
        assert report.bound == bound_report(cfg.spec).rel_sens_bound
        assert report.ratio_to_bound == report.rel_sensitivity / report.bound
        assert report.seed == SEED
        assert report.trials == 2000

    def test_default_trials(self):
        cfg = ExperimentConfig(spec=make_spec(1.0), kind="photon_counting")
        assert cfg.trials == DEFAULT_TRIALS

    def test_quadrupling_trials_halves_error_bars(self):
        small = run_experiment(make_cfg(5.0, EstimatorKind.PHOTON_COUNTING, trials=8000))
        big = run_experiment(make_cfg(5.0, EstimatorKind.PHOTON_COUNTING, trials=32_000))
        assert big.bootstrap_sigma == pytest.approx(small.bootstrap_sigma / 2, rel=0.2)

    def test_trial_outcome_accessor(self):
        cfg = make_cfg(1.0, EstimatorKind.PHOTON_COUNTING, trials=1000)
        batch = simulate_trials(cfg)
        outcome = batch.outcome(0)
        assert outcome.estimate == batch.estimates[0]
        assert outcome.raw_summary == {"mean_count": batch.raw[0]}
        assert outcome.estimate >= 0.0
