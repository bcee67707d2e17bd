"""Cross-checking the analytic quantum score against a blind matrix solve.

The thermal state's score operator (symmetric logarithmic derivative)
has the closed diagonal form N/(n0*(n0+1)) - 1/(n0+1), and squaring it
under the state gives the per-mode information 1/(n0*(n0+1)).  Neither
fact is taken on faith here: a numeric route solves the defining
equation  d(rho)/d(n0) = (L rho + rho L)/2  directly from the truncated
density matrix and its derivative, then evaluates Tr(rho L^2) as a
matrix trace.

Run:  python demos/02_score_operator_oracle.py
"""
import numpy as np

from qcrb import (
    drho_dn0,
    lyapunov_residual,
    qfi_numeric,
    qfi_single_mode,
    sld_analytic,
    sld_numeric,
    thermal_density_operator,
)

print(f"{'n0':>8} {'cutoff':>7} {'tail':>9} {'QFI closed':>12} {'QFI matrix':>12} "
      f"{'rel err':>9} {'SLD gap':>9} {'residual':>9}")

for n0 in (0.5, 1.0, 5.0, 20.0, 100.0):
    rho = thermal_density_operator(n0)
    drho = drho_dn0(n0, rho.dim)
    numeric = sld_numeric(rho, drho)
    analytic = sld_analytic(n0, rho.dim)

    gap = np.max(np.abs(numeric.matrix - analytic.matrix))
    residual = lyapunov_residual(rho, drho, numeric)
    closed = qfi_single_mode(n0)
    traced = qfi_numeric(rho, numeric)

    print(
        f"{n0:>8.1f} {rho.dim:>7d} {rho.tail_mass:>9.1e} {closed:>12.6e} "
        f"{traced:>12.6e} {abs(traced - closed) / closed:>9.1e} {gap:>9.1e} {residual:>9.1e}"
    )

print(
    "\nThe defining-equation solve lands on the closed form to machine-level"
    "\nagreement at every occupation: the information really is 1/(n0*(n0+1))"
    "\nper mode, which is what makes the sensitivity floor (n0+1)/(n0*dnu*T)."
)
