"""Classical surrogate sampling of the filtered thermal field.

The thermal field is Gaussian and fully specified by its correlation
kernel, so realizations can be drawn directly in the frequency domain:
independent circularly-symmetric complex Gaussian coefficients on an
exact grid of in-band FFT bins, transformed to a baseband record.  The
carrier is factored out analytically; a realization is the complex
envelope in units of sqrt(photons/s).

Projecting records onto the observation-window mode basis gives an
ensemble estimate of the modal covariance that is independent of the
quadrature route in :mod:`qcrb.modal` -- the two are cross-checked in
the verification suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modal import ModeSet
from .rng import PURPOSE_SYNTHESIS, substream

__all__ = [
    "FieldRealization",
    "modal_projection_ensemble",
    "project_onto_modes",
    "synthesize_field",
]

_MIN_OVERSAMPLE = 4
_GUARD_COHERENCE_TIMES = 10.0


@dataclass(frozen=True)
class FieldRealization:
    """One sampled record of the complex baseband envelope."""

    samples: np.ndarray  # complex, sqrt(photons/s)
    dt: float
    t0: float

    @property
    def duration(self) -> float:
        return self.samples.size * self.dt

    def average_power(self) -> float:
        """Time-domain mean of |samples|^2 [photons/s]."""
        return float(np.mean(np.abs(self.samples) ** 2))

    def integrated_spectral_density(self) -> float:
        """Sum of squared DFT coefficient magnitudes, normalized to match
        :meth:`average_power` identically for any record."""
        spectrum = np.fft.fft(self.samples) / self.samples.size
        return float(np.sum(np.abs(spectrum) ** 2))

    def parseval_residual(self) -> float:
        """Relative gap between time-domain power and integrated spectrum."""
        p_t = self.average_power()
        p_f = self.integrated_spectral_density()
        return abs(p_t - p_f) / max(p_t, 1e-300)


def _synthesis_layout(spec, dt, record_length):
    """Validate sampling and choose an FFT layout with an exact bin count.

    The record length is snapped up to an integer number of coherence
    times so the band spans exactly K = delta_nu * L frequency bins.
    The band is discretized trapezoidally: bins -K/2 .. K/2 inclusive,
    with the two edge bins at half power.  That keeps the ensemble
    autocorrelation exactly n0*delta_nu at zero lag, exactly zero at lag
    1/delta_nu, and reproduces the continuum half-occupation of a mode
    sitting exactly on the band edge.
    """
    tau_c = spec.tau_c
    oversample = tau_c / dt
    if dt > tau_c / _MIN_OVERSAMPLE * (1 + 1e-12):
        raise ValueError(f"dt must be <= tau_c/{_MIN_OVERSAMPLE}")
    q = round(oversample)
    if abs(oversample - q) > 1e-6 * q:
        raise ValueError("dt must evenly subdivide the coherence time")
    target = spec.T_obs + _GUARD_COHERENCE_TIMES * tau_c
    if record_length is None:
        record_length = target
    if record_length < target * (1 - 1e-12):
        raise ValueError(
            f"record length must cover T_obs + {_GUARD_COHERENCE_TIMES:.0f} coherence times"
        )
    n_coherence = math.ceil(record_length / tau_c - 1e-9)
    n_samples = n_coherence * q
    k_band = n_coherence  # delta_nu * L, exact by construction
    return n_samples, k_band, q


def _band_bins(k_band, length, n0):
    """Bin offsets and per-bin amplitude scales of the synthesized band.

    With an even bin count the band edges land exactly on bins, which get
    half power (trapezoidal discretization of the flat profile); with an
    odd count the edges fall between bins and all bins carry full power.
    Either way the total band power is exactly n0 * k_band / length.
    """
    bins = np.arange(-(k_band // 2), k_band // 2 + 1)
    scales = np.full(bins.size, math.sqrt(n0 / (2.0 * length)))
    if k_band % 2 == 0:
        scales[0] *= math.sqrt(0.5)
        scales[-1] *= math.sqrt(0.5)
    return bins, scales


def synthesize_field(spec, dt, rng, *, record_length=None) -> FieldRealization:
    """Draw one realization of the baseband thermal envelope.

    Zero-mean circularly-symmetric complex Gaussian, stationary, with a
    flat power spectral density of n0 over a band of width delta_nu
    centered at baseband zero.  A frequency offset f enters as
    exp(-i*2*pi*f*t), matching the sign carried by the optical carrier.
    Requires ``dt <= 1/(4*delta_nu)`` and a record at least
    ``T_obs + 10*tau_c`` long (defaults to exactly that, snapped up to
    whole coherence times).
    """
    n_samples, k_band, _ = _synthesis_layout(spec, dt, record_length)
    length = n_samples * dt
    bins, scales = _band_bins(k_band, length, spec.n0)
    draws = rng.standard_normal((2, bins.size))
    coeff = scales * (draws[0] + 1j * draws[1])
    spectrum = np.zeros(n_samples, dtype=complex)
    spectrum[bins % n_samples] = coeff
    # forward FFT realizes sum_k c_k exp(-i 2 pi f_k t), the physics sign
    samples = np.fft.fft(spectrum)
    return FieldRealization(samples=samples, dt=dt, t0=-0.5 * length)


def _window_slice(field: FieldRealization, T_obs):
    """Sample indices covering [-T/2, T/2) on the record's grid."""
    start_f = (-0.5 * T_obs - field.t0) / field.dt
    count_f = T_obs / field.dt
    start, count = round(start_f), round(count_f)
    if abs(start_f - start) > 1e-6 or abs(count_f - count) > 1e-6:
        raise ValueError("observation window is not aligned to the sample grid")
    if start < 0 or start + count > field.samples.size:
        raise ValueError("field record does not cover the observation window")
    return start, count


def _mode_phases(field: FieldRealization, mode_set: ModeSet, spec):
    """Matrix of conjugated, baseband-shifted mode functions on the window.

    The physical mode at index m oscillates at m/T; with the carrier
    factored out only the detuning (m - nu0*T)/T survives, so the
    projection of the envelope onto mode m uses exp(+i*2*pi*j*t/T)/sqrt(T)
    with j = m - nu0*T.
    """
    start, count = _window_slice(field, spec.T_obs)
    t = field.t0 + (start + np.arange(count)) * field.dt
    j_rel = mode_set.relative_indices.astype(float)
    phases = np.exp(2j * np.pi * np.outer(t, j_rel) / spec.T_obs)
    return start, count, phases * (field.dt / math.sqrt(spec.T_obs))


def project_onto_modes(field: FieldRealization, mode_set: ModeSet, spec) -> np.ndarray:
    """Riemann-sum mode amplitudes a_m of one record over [-T/2, T/2)."""
    start, count, phases = _mode_phases(field, mode_set, spec)
    return field.samples[start : start + count] @ phases


def modal_projection_ensemble(
    spec,
    mode_set: ModeSet,
    *,
    realizations,
    master_seed,
    oversample=8,
    record_length=None,
    purpose=PURPOSE_SYNTHESIS,
    chunk=256,
) -> np.ndarray:
    """Mode amplitudes for an ensemble of synthesized records.

    Returns an array of shape (realizations, M).  Realizations are drawn
    in fixed-size chunks, each on its own counter-derived substream, so
    the ensemble is reproducible and independent of any parallel
    scheduling of the chunks.
    """
    dt = spec.tau_c / oversample
    n_samples, k_band, _ = _synthesis_layout(spec, dt, record_length)
    length = n_samples * dt
    bins, scales = _band_bins(k_band, length, spec.n0)
    template = FieldRealization(
        samples=np.zeros(n_samples, dtype=complex), dt=dt, t0=-0.5 * length
    )
    start, count, phases = _mode_phases(template, mode_set, spec)

    out = np.empty((realizations, mode_set.size), dtype=complex)
    cols = bins % n_samples
    for chunk_index, lo in enumerate(range(0, realizations, chunk)):
        hi = min(lo + chunk, realizations)
        rng = substream(master_seed, purpose=purpose, index=chunk_index)
        draws = rng.standard_normal((hi - lo, 2, bins.size))
        coeff = scales * (draws[:, 0, :] + 1j * draws[:, 1, :])
        spectrum = np.zeros((hi - lo, n_samples), dtype=complex)
        spectrum[:, cols] = coeff
        records = np.fft.fft(spectrum, axis=1)
        out[lo:hi] = records[:, start : start + count] @ phases
    return out
