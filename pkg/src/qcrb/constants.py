"""Physical constants (exact SI-2019 defined values)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Final


@dataclass(frozen=True)
class PhysicalConstants:
    """Planck and Boltzmann constants, SI units.

    Both values are exact by the 2019 SI redefinition; they are the only
    dimensional constants the source model needs.
    """

    h: float = 6.62607015e-34  # J*s
    k: float = 1.380649e-23    # J/K


CONSTANTS: Final[PhysicalConstants] = PhysicalConstants()

#: Planck constant [J*s]
H_PLANCK: Final[float] = CONSTANTS.h
#: Boltzmann constant [J/K]
K_BOLTZMANN: Final[float] = CONSTANTS.k

__all__ = ["PhysicalConstants", "CONSTANTS", "H_PLANCK", "K_BOLTZMANN"]
