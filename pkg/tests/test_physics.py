"""Source-model physics: occupations, correlation kernel, mode counting."""
import math
from decimal import Decimal, getcontext

import numpy as np
import pytest
from scipy.integrate import quad

from qcrb.constants import H_PLANCK, K_BOLTZMANN
from qcrb.physics import (
    ApproximationWarning,
    CorrelationKernel,
    SourceSpec,
    coherence_time,
    correlation_kernel_eval,
    mode_count,
    planck_occupation,
    rayleigh_jeans_occupation,
)


def _planck_oracle(x_num, x_den):
    """Arbitrary-precision 1/(e^x - 1) for rational x, via decimal."""
    getcontext().prec = 40
    x = Decimal(x_num) / Decimal(x_den)
    return float(1 / (x.exp() - 1))


def _temperature_for_ratio(nu, ratio):
    """T_s such that h*nu/(k*T_s) equals the requested ratio."""
    return H_PLANCK * nu / (K_BOLTZMANN * ratio)


class TestPlanckOccupation:
    def test_ln2_ratio_gives_unity(self):
        T_s = 300.0
        nu = math.log(2.0) * K_BOLTZMANN * T_s / H_PLANCK
        assert planck_occupation(nu, T_s) == pytest.approx(1.0, rel=1e-12)

    def test_small_ratio_against_decimal_oracle(self):
        # oracle value frozen from 40-digit decimal evaluation at x = 1/100
        frozen = 99.50083333194445
        assert _planck_oracle(1, 100) == pytest.approx(frozen, rel=1e-15)
        nu = 1e9
        occ = planck_occupation(nu, _temperature_for_ratio(nu, 0.01))
        assert occ == pytest.approx(frozen, rel=1e-12)

    def test_deep_wien_tail_underflows_to_exact_zero(self):
        nu = 1e12
        with pytest.warns(ApproximationWarning):
            occ = planck_occupation(nu, _temperature_for_ratio(nu, 800.0))
        assert occ == 0.0

    def test_monotone_decreasing_in_frequency(self):
        T_s = 10.0
        nus = np.logspace(6, 12, 1500)
        occ = planck_occupation(nus, T_s)
        assert np.all(occ > 0)
        assert np.all(np.diff(occ) < 0)

    @pytest.mark.parametrize("nu,T_s", [(-1.0, 300.0), (0.0, 300.0), (1e9, 0.0), (1e9, -5.0)])
    def test_domain_errors(self, nu, T_s):
        with pytest.raises(ValueError):
            planck_occupation(nu, T_s)


class TestRayleighJeansOccupation:
    def test_unity_when_thermal_energy_matches_photon_energy(self):
        nu0 = 5e9
        T_s = H_PLANCK * nu0 / K_BOLTZMANN
        with pytest.warns(ApproximationWarning):
            occ = rayleigh_jeans_occupation(nu0, T_s)
        assert occ == pytest.approx(1.0, rel=1e-14)

    def test_small_ratio_vs_planck(self):
        nu0 = 1e9
        T_s = _temperature_for_ratio(nu0, 0.01)
        rj = rayleigh_jeans_occupation(nu0, T_s)
        pl = planck_occupation(nu0, T_s)
        assert rj == pytest.approx(100.0, rel=1e-12)
        assert abs(rj - pl) / pl < 0.0051

    def test_order_unity_ratio_is_flagged(self):
        nu0 = 1e9
        T_s = _temperature_for_ratio(nu0, 1.0)
        with pytest.warns(ApproximationWarning):
            rj = rayleigh_jeans_occupation(nu0, T_s)
        pl = planck_occupation(nu0, T_s)
        assert rj == pytest.approx(1.0, rel=1e-12)
        assert pl == pytest.approx(1.0 / (math.e - 1.0), rel=1e-12)

    def test_relative_error_monotone_in_ratio(self):
        nu0 = 1e9
        ratios = np.logspace(-3, 0.5, 1000)
        errs = []
        for r in ratios:
            T_s = _temperature_for_ratio(nu0, r)
            rj = K_BOLTZMANN * T_s / (H_PLANCK * nu0)
            pl = planck_occupation(nu0, T_s)
            errs.append((rj - pl) / pl)
        assert np.all(np.diff(errs) > 0)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            rayleigh_jeans_occupation(0.0, 300.0)
        with pytest.raises(ValueError):
            rayleigh_jeans_occupation(1e9, 0.0)


class TestCorrelationKernel:
    kernel = CorrelationKernel(n0=2.5, delta_nu=1e6, nu0=1e9)

    def test_zero_lag_is_real_peak(self):
        val = correlation_kernel_eval(self.kernel, 0.0)
        assert val == complex(self.kernel.peak)
        assert self.kernel.peak == 2.5e6

    def test_sinc_zeros_at_integer_lags(self):
        for k in (1, 2, 5, -3):
            val = correlation_kernel_eval(self.kernel, k / self.kernel.delta_nu)
            assert abs(val) <= 1e-15 * self.kernel.peak

    def test_half_coherence_lag_magnitude(self):
        val = correlation_kernel_eval(self.kernel, 0.5 / self.kernel.delta_nu)
        assert abs(val) == pytest.approx(self.kernel.peak * 2.0 / math.pi, rel=1e-12)

    def test_hermitian_symmetry_exact(self):
        rng = np.random.default_rng(7)
        taus = rng.uniform(-10e-6, 10e-6, size=257)
        fwd = correlation_kernel_eval(self.kernel, taus)
        rev = correlation_kernel_eval(self.kernel, -taus)
        assert np.array_equal(rev, np.conj(fwd))

    def test_magnitude_bounded_by_peak(self):
        taus = np.linspace(-10e-6, 10e-6, 2001)
        mags = np.abs(correlation_kernel_eval(self.kernel, taus))
        assert np.all(mags <= self.kernel.peak * (1 + 1e-15))
        nonzero = taus != 0.0
        assert np.max(mags[nonzero]) < self.kernel.peak

    def test_phase_sensitive_part_is_zero(self):
        assert np.all(self.kernel.phase_sensitive_part(np.linspace(-1, 1, 11)) == 0)

    def test_nonfinite_lag_rejected(self):
        with pytest.raises(ValueError):
            correlation_kernel_eval(self.kernel, math.inf)


class TestCoherenceTime:
    def test_megahertz_gives_microsecond(self):
        assert coherence_time(1e6) == 1e-6

    def test_unit_bandwidth(self):
        assert coherence_time(1.0) == 1.0

    def test_matches_g1_squared_integral(self):
        delta_nu = 1e6
        tau_c = coherence_time(delta_nu)
        g1sq = lambda tau: np.sinc(delta_nu * tau) ** 2
        val, _ = quad(g1sq, -50 * tau_c, 50 * tau_c, limit=500)
        assert val == pytest.approx(tau_c, rel=0.01)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            coherence_time(0.0)


class TestModeCount:
    def test_radio_example(self):
        mc = mode_count(1e6, 1.0)
        assert mc.count == 10**6
        assert mc.exact

    def test_boundary_is_single_mode(self):
        assert mode_count(1.0, 1.0) == (1, True)

    def test_fractional_product_rounds_with_cleared_flag(self):
        mc = mode_count(64.4, 1.0)
        assert mc.count == 64
        assert not mc.exact

    def test_subunit_product_rejected(self):
        with pytest.raises(ValueError):
            mode_count(0.5, 1.0)


class TestSourceSpec:
    def test_derived_quantities(self):
        spec = SourceSpec.from_occupation(n0=10.0, nu0=1e9, delta_nu=1e6, T_obs=1e-4)
        assert spec.n0 == pytest.approx(10.0, rel=1e-14)
        assert spec.tau_c == 1e-6
        assert spec.M == 100
        assert spec.mode_count_exact
        assert spec.long_observation
        assert spec.bandwidth_time_product == pytest.approx(100.0, rel=1e-15)

    def test_temperature_and_occupation_paths_agree(self):
        occ_spec = SourceSpec.from_occupation(n0=20.0, nu0=1e9, delta_nu=1e6, T_obs=1e-3)
        temp_spec = SourceSpec.from_temperature(
            T_s=occ_spec.T_s, nu0=1e9, delta_nu=1e6, T_obs=1e-3
        )
        assert temp_spec.n0 == pytest.approx(occ_spec.n0, rel=1e-14)

    def test_long_observation_flag_cleared_below_threshold(self):
        spec = SourceSpec.from_occupation(n0=1.0, nu0=1e9, delta_nu=1e6, T_obs=0.99e-4)
        assert not spec.long_observation
        assert spec.M == 99

    def test_from_temperature_warns_outside_flat_regime(self):
        nu0 = 1e9
        T_s = _temperature_for_ratio(nu0, 0.5)
        with pytest.warns(ApproximationWarning):
            SourceSpec.from_temperature(T_s=T_s, nu0=nu0, delta_nu=1e6, T_obs=1e-3)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(T_s=-1.0, nu0=1e9, delta_nu=1e6, T_obs=1.0),
            dict(T_s=300.0, nu0=0.0, delta_nu=1e6, T_obs=1.0),
            dict(T_s=300.0, nu0=1e9, delta_nu=3e9, T_obs=1.0),
            dict(T_s=300.0, nu0=1e9, delta_nu=1e6, T_obs=0.0),
        ],
    )
    def test_invalid_parameters_rejected(self, kwargs):
        with pytest.raises(ValueError):
            SourceSpec(**kwargs)

    def test_kernel_accessor(self):
        spec = SourceSpec.from_occupation(n0=1.0, nu0=1e9, delta_nu=1e6, T_obs=1e-3)
        kern = spec.kernel()
        assert kern.peak == pytest.approx(spec.n0 * spec.delta_nu, rel=1e-14)
