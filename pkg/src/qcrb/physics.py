"""Closed-form physics of a band-filtered thermal source.

A stationary thermal field of brightness temperature ``T_s`` is passed
through an ideal rectangular filter of width ``delta_nu`` centered on
``nu0`` and observed for a duration ``T_obs``.  Everything downstream
(mode decomposition, quantum bounds, estimator simulations) is driven by
four numbers derived here:

* the mean photon occupation per mode ``n0``,
* the coherence time ``tau_c = 1/delta_nu``,
* the number of temporal modes ``M = round(delta_nu * T_obs)``,
* the first-order correlation kernel ``K(tau)``.

All quantities are SI; ``n0`` is dimensionless.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .constants import H_PLANCK, K_BOLTZMANN

__all__ = [
    "ApproximationWarning",
    "CorrelationKernel",
    "ModeCount",
    "SourceSpec",
    "coherence_time",
    "correlation_kernel_eval",
    "mode_count",
    "planck_occupation",
    "rayleigh_jeans_occupation",
]

# exp argument beyond which 1/(e^x - 1) underflows float64 to exactly 0
_EXP_UNDERFLOW = 700.0

# flat-spectrum occupation degrades past this photon-energy/thermal-energy ratio
_RJ_WARN_RATIO = 0.1

# ratio of observation time to coherence time above which the
# many-mode asymptotics used throughout are comfortably valid
_LONG_OBSERVATION_RATIO = 100.0

_INTEGER_TOL = 1e-9


class ApproximationWarning(UserWarning):
    """A closed-form approximation was evaluated outside its comfort zone."""


def planck_occupation(nu, T_s):
    """Mean thermal photon occupation 1/(exp(h*nu/k*T_s) - 1).

    Parameters
    ----------
    nu : float or array_like
        Frequency in Hz, > 0.
    T_s : float
        Source temperature in K, > 0.

    Returns
    -------
    float or ndarray
        Occupation number, strictly positive and strictly decreasing in
        ``nu``.  When ``h*nu/(k*T_s) > 700`` the result underflows float64;
        0.0 is returned exactly and an :class:`ApproximationWarning` is
        emitted so callers can tell a true zero from an underflow.
    """
    nu_arr = np.asarray(nu, dtype=float)
    if np.any(nu_arr <= 0.0):
        raise ValueError("frequency must be positive")
    if not T_s > 0.0:
        raise ValueError("source temperature must be positive")
    x = H_PLANCK * nu_arr / (K_BOLTZMANN * T_s)
    underflow = x > _EXP_UNDERFLOW
    if np.any(underflow):
        warnings.warn(
            "h*nu/(k*T_s) exceeds 700; occupation underflows to exactly 0",
            ApproximationWarning,
            stacklevel=2,
        )
    with np.errstate(over="ignore"):
        occ = np.where(underflow, 0.0, 1.0 / np.expm1(np.where(underflow, 1.0, x)))
    if np.isscalar(nu) or nu_arr.ndim == 0:
        return float(occ)
    return occ


def rayleigh_jeans_occupation(nu0, T_s):
    """Flat-band occupation k*T_s/(h*nu0).

    Valid for ``h*nu0/(k*T_s) << 1``; an :class:`ApproximationWarning` is
    emitted once the ratio exceeds 0.1, where the error against the exact
    thermal occupation passes the few-percent level.
    """
    if not nu0 > 0.0:
        raise ValueError("center frequency must be positive")
    if not T_s > 0.0:
        raise ValueError("source temperature must be positive")
    ratio = H_PLANCK * nu0 / (K_BOLTZMANN * T_s)
    if ratio > _RJ_WARN_RATIO:
        warnings.warn(
            f"h*nu0/(k*T_s) = {ratio:.3g} > {_RJ_WARN_RATIO}; "
            "flat-spectrum occupation k*T_s/(h*nu0) is degraded",
            ApproximationWarning,
            stacklevel=2,
        )
    return K_BOLTZMANN * T_s / (H_PLANCK * nu0)


def coherence_time(delta_nu):
    """Coherence time 1/delta_nu of the filtered field.

    Equals the integral of |g1(tau)|^2 for the flat rectangular spectrum,
    and the lag of the first zero of the correlation kernel.
    """
    if not delta_nu > 0.0:
        raise ValueError("bandwidth must be positive")
    return 1.0 / delta_nu


class ModeCount(NamedTuple):
    count: int
    exact: bool  # True when delta_nu * T_obs is integral


def mode_count(delta_nu, T_obs):
    """Number of temporal modes resolved in the observation window.

    Returns ``round(delta_nu * T_obs)`` (half away from zero) together
    with a flag recording whether the product was integral.  The regime
    ``delta_nu * T_obs < 1`` has no many-mode asymptotics and is an error.
    """
    if not delta_nu > 0.0:
        raise ValueError("bandwidth must be positive")
    if not T_obs > 0.0:
        raise ValueError("observation time must be positive")
    product = delta_nu * T_obs
    if product < 1.0:
        raise ValueError(
            f"delta_nu * T_obs = {product:.3g} < 1: single-mode regime is unsupported"
        )
    count = int(math.floor(product + 0.5))
    exact = abs(product - count) <= _INTEGER_TOL * max(1.0, abs(product))
    return ModeCount(count=count, exact=exact)


@dataclass(frozen=True)
class SourceSpec:
    """Full experiment parameterization.

    Constructed from a source temperature (:meth:`from_temperature`) or
    directly from an occupation number (:meth:`from_occupation`).  The two
    parameterizations are related by the exact in-model identity
    ``n0 = k*T_s/(h*nu0)``.

    Attributes
    ----------
    T_s, nu0, delta_nu, T_obs : float
        Temperature [K], center frequency [Hz], bandwidth [Hz],
        observation time [s].
    n0 : float
        Occupation per mode (derived).
    tau_c : float
        Coherence time 1/delta_nu [s] (derived).
    M : int
        Mode count round(delta_nu*T_obs) (derived).
    mode_count_exact : bool
        Whether delta_nu*T_obs was integral.
    long_observation : bool
        Set when T_obs/tau_c >= 100.
    """

    T_s: float
    nu0: float
    delta_nu: float
    T_obs: float
    n0: float = field(init=False)
    tau_c: float = field(init=False)
    M: int = field(init=False)
    mode_count_exact: bool = field(init=False)
    long_observation: bool = field(init=False)

    def __post_init__(self):
        if not self.T_s > 0.0:
            raise ValueError("source temperature must be positive")
        if not self.nu0 > 0.0:
            raise ValueError("center frequency must be positive")
        if not 0.0 < self.delta_nu < 2.0 * self.nu0:
            raise ValueError("bandwidth must satisfy 0 < delta_nu < 2*nu0")
        if not self.T_obs > 0.0:
            raise ValueError("observation time must be positive")
        n0 = K_BOLTZMANN * self.T_s / (H_PLANCK * self.nu0)
        tau_c = coherence_time(self.delta_nu)
        mc = mode_count(self.delta_nu, self.T_obs)
        object.__setattr__(self, "n0", n0)
        object.__setattr__(self, "tau_c", tau_c)
        object.__setattr__(self, "M", mc.count)
        object.__setattr__(self, "mode_count_exact", mc.exact)
        object.__setattr__(
            self, "long_observation", self.T_obs / tau_c >= _LONG_OBSERVATION_RATIO
        )

    @classmethod
    def from_temperature(cls, T_s, nu0, delta_nu, T_obs) -> "SourceSpec":
        """Build from a physical temperature; warns when the flat-spectrum
        occupation approximation is degraded (see
        :func:`rayleigh_jeans_occupation`)."""
        rayleigh_jeans_occupation(nu0, T_s)  # emits the regime warning
        return cls(T_s=T_s, nu0=nu0, delta_nu=delta_nu, T_obs=T_obs)

    @classmethod
    def from_occupation(cls, n0, nu0, delta_nu, T_obs) -> "SourceSpec":
        """Build from an occupation number, taking ``n0`` as primitive."""
        if not n0 > 0.0:
            raise ValueError("occupation must be positive")
        T_s = n0 * H_PLANCK * nu0 / K_BOLTZMANN
        return cls(T_s=T_s, nu0=nu0, delta_nu=delta_nu, T_obs=T_obs)

    @property
    def bandwidth_time_product(self) -> float:
        """The real-valued product delta_nu * T_obs used by the bound formulas."""
        return self.delta_nu * self.T_obs

    def kernel(self) -> "CorrelationKernel":
        return CorrelationKernel(n0=self.n0, delta_nu=self.delta_nu, nu0=self.nu0)


@dataclass(frozen=True)
class CorrelationKernel:
    """First-order (phase-insensitive) correlation kernel of the filtered field.

    ``K(tau) = n0 * delta_nu * sinc(delta_nu*tau) * exp(-i*2*pi*nu0*tau)``
    with ``sinc(x) = sin(pi*x)/(pi*x)``.  The phase-sensitive counterpart is
    identically zero for thermal light and is exposed only as
    :meth:`phase_sensitive_part`.
    """

    n0: float
    delta_nu: float
    nu0: float

    def __post_init__(self):
        if not self.n0 > 0.0:
            raise ValueError("occupation must be positive")
        if not self.delta_nu > 0.0:
            raise ValueError("bandwidth must be positive")
        if not self.nu0 > 0.0:
            raise ValueError("center frequency must be positive")

    @property
    def peak(self) -> float:
        """Value at zero lag, n0*delta_nu [photons/s]."""
        return self.n0 * self.delta_nu

    @staticmethod
    def phase_sensitive_part(tau):
        """Identically zero for a thermal field."""
        return np.zeros_like(np.asarray(tau, dtype=float), dtype=complex)


def correlation_kernel_eval(kernel: CorrelationKernel, tau):
    """Evaluate the correlation kernel at lag(s) ``tau`` [s].

    The kernel is evaluated through ``|tau|`` and conjugated for negative
    lags, so Hermitian symmetry ``K(-tau) == conj(K(tau))`` holds exactly
    in floating point.
    """
    tau_arr = np.asarray(tau, dtype=float)
    if not np.all(np.isfinite(tau_arr)):
        raise ValueError("lag must be finite")
    a = np.abs(tau_arr)
    mag = kernel.peak * np.sinc(kernel.delta_nu * a)
    phase = 2.0 * np.pi * kernel.nu0 * a
    val = mag * (np.cos(phase) - 1j * np.sin(phase))
    out = np.where(tau_arr >= 0, val, np.conj(val))
    if np.isscalar(tau) or tau_arr.ndim == 0:
        return complex(out)
    return out
