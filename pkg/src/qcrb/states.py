"""Truncated-Fock and phase-space representations of the thermal state.

The single-mode thermal state is diagonal in the number basis with a
geometric (Bose-Einstein) photon distribution; truncating at a cutoff D
removes a geometric tail whose mass is recorded on the operator.  The
default cutoff rule D = max(64, ceil(40*n0)) keeps that tail below
1e-17 for n0 <= 2 and below 1e-12 throughout the supported range.

The full in-band state is an M-fold product of identical thermal modes;
it is represented by its Gaussian descriptor and per-mode marginals, and
the D^M product matrix is never materialized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modal import GaussianStateDescriptor, thermal_covariance

__all__ = [
    "MultimodeThermalState",
    "TruncatedDensityOperator",
    "characteristic_function",
    "multimode_state",
    "recommended_cutoff",
    "thermal_density_operator",
]

_TAIL_TARGET = 1e-12
_MAX_DIM = 1 << 20


class CutoffEscalationError(RuntimeError):
    """No admissible Fock cutoff below the hard dimension cap."""


@dataclass(frozen=True)
class TruncatedDensityOperator:
    """Density matrix on a finite Fock ladder plus the truncated tail mass."""

    dim: int
    matrix: np.ndarray
    tail_mass: float

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("Fock cutoff must be at least 2")
        if self.matrix.shape != (self.dim, self.dim):
            raise ValueError("matrix shape must match the cutoff")
        if self.tail_mass < 0.0:
            raise ValueError("tail mass cannot be negative")

    def validate(self, *, herm_tol=1e-12, eig_tol=1e-12) -> None:
        """Assert Hermiticity, trace normalization, and positivity."""
        gap = np.max(np.abs(self.matrix - self.matrix.conj().T))
        if gap > herm_tol:
            raise ValueError(f"matrix is not Hermitian (max gap {gap:.3e})")
        trace = float(np.trace(self.matrix).real)
        if not (1.0 - self.tail_mass - 1e-12 <= trace <= 1.0 + 1e-12):
            raise ValueError(f"trace {trace!r} outside [1 - tail_mass, 1]")
        if _is_diagonal(self.matrix):
            smallest = float(np.min(np.diag(self.matrix).real))
        else:
            smallest = float(np.min(np.linalg.eigvalsh(self.matrix)))
        if smallest < -eig_tol:
            raise ValueError(f"negative eigenvalue {smallest:.3e}")

    def mean_photon_number(self) -> float:
        occ = np.arange(self.dim)
        return float(np.real(np.sum(occ * np.diag(self.matrix))))


def _is_diagonal(matrix: np.ndarray) -> bool:
    off = matrix.copy()
    np.fill_diagonal(off, 0.0)
    return not np.any(off)


def recommended_cutoff(n0: float) -> int:
    """Default Fock cutoff max(64, ceil(40*n0))."""
    return max(64, math.ceil(40.0 * n0))


def thermal_probabilities(n0: float, dim: int) -> np.ndarray:
    """Bose-Einstein weights P(k) = (n0/(n0+1))^k / (n0+1) for k < dim.

    No cutoff floor is applied here; this is the raw ladder used both by
    the guarded constructor below and by deliberate small-cutoff
    diagnostics.
    """
    if not n0 > 0.0:
        raise ValueError("occupation must be positive")
    ratio = n0 / (n0 + 1.0)
    return (1.0 / (n0 + 1.0)) * ratio ** np.arange(dim)


def thermal_density_operator(n0: float, cutoff: int | None = None) -> TruncatedDensityOperator:
    """Truncated thermal state of mean occupation ``n0``.

    With ``cutoff=None`` the recommended rule max(64, ceil(40*n0)) is
    applied and, should the geometric tail still exceed 1e-12, the cutoff
    doubles until it does not (capped at 2^20 dimensions).  An explicit
    cutoff below the hard floor ceil(40*n0) is an error: the tail it
    discards is no longer negligible for oracle work.
    """
    if not n0 > 0.0:
        raise ValueError("occupation must be positive")
    if cutoff is None:
        dim = recommended_cutoff(n0)
        while dim <= _MAX_DIM and (n0 / (n0 + 1.0)) ** dim >= _TAIL_TARGET:
            dim *= 2
        if dim > _MAX_DIM:
            raise CutoffEscalationError(
                f"occupation {n0} needs a ladder beyond {_MAX_DIM} levels "
                f"for tail mass < {_TAIL_TARGET}"
            )
    else:
        floor = max(2, math.ceil(40.0 * n0))
        if cutoff < floor:
            raise ValueError(
                f"cutoff {cutoff} below the floor {floor} required for n0 = {n0}"
            )
        dim = int(cutoff)
    probs = thermal_probabilities(n0, dim)
    tail = (n0 / (n0 + 1.0)) ** dim
    return TruncatedDensityOperator(dim=dim, matrix=np.diag(probs), tail_mass=float(tail))


def _omega_apply(vec: np.ndarray) -> np.ndarray:
    """Apply the symplectic form blockwise: (q, p) -> (p, -q)."""
    out = np.empty_like(vec)
    out[0::2] = vec[1::2]
    out[1::2] = -vec[0::2]
    return out


def characteristic_function(desc: GaussianStateDescriptor, xi) -> complex:
    """Wigner characteristic function of a Gaussian state.

    chi(xi) = exp(-i xi^T Omega mean - xi^T Omega cov Omega^T xi / 2).
    """
    xi = np.asarray(xi, dtype=float)
    if xi.shape != desc.mean.shape:
        raise ValueError(
            f"xi has shape {xi.shape}, expected {desc.mean.shape}"
        )
    linear = float(xi @ _omega_apply(desc.mean))
    rotated = -_omega_apply(xi)  # Omega^T xi
    quadratic = float(rotated @ desc.cov @ rotated)
    return complex(np.exp(-1j * linear - 0.5 * quadratic))


@dataclass(frozen=True)
class MultimodeThermalState:
    """Product of identical thermal modes, held as a Gaussian descriptor."""

    n0: float
    mode_count: int
    descriptor: GaussianStateDescriptor

    def marginal(self, cutoff: int | None = None) -> TruncatedDensityOperator:
        """Single-mode reduced state; identical for every mode."""
        return thermal_density_operator(self.n0, cutoff)

    def total_mean_photons(self) -> float:
        """Sum of per-mode occupations, read off the covariance trace."""
        return float((np.trace(self.descriptor.cov) - self.mode_count) / 2.0)


def multimode_state(spec) -> MultimodeThermalState:
    """In-band state of the filtered source: M independent thermal modes."""
    return MultimodeThermalState(
        n0=spec.n0,
        mode_count=spec.M,
        descriptor=thermal_covariance(spec.n0, spec.M),
    )
