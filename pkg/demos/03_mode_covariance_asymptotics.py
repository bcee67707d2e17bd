"""How the exact modal covariance approaches n0 * rect * delta.

The in-band Fourier modes of the observation window are only
approximately independent thermal modes: the exact two-time covariance
integral leaves O(tau_c/T) leakage on and off the diagonal, and a mode
sitting exactly on the filter edge holds half an occupation (the
midpoint value of the spectral jump).  This script evaluates the exact
integral by quadrature, compares it with a brute-force route (projecting
synthesized field records onto the modes), and watches the interior
deviation shrink as the band-time product grows.

Run:  python demos/03_mode_covariance_asymptotics.py
"""
import numpy as np

from qcrb import SourceSpec, build_mode_set, modal_covariance_matrix
from qcrb.modal import asymptote_deviation_stats
from qcrb.synthesis import modal_projection_ensemble

N0 = 1.0
REALIZATIONS = 3000

print(f"{'dnu*T':>6} {'max dev (interior)':>19} {'5*n0/(dnu*T)':>13} "
      f"{'edge mode':>10} {'synth edge':>11}")

for product in (16, 32, 64):
    spec = SourceSpec.from_occupation(
        n0=N0, nu0=1024.0, delta_nu=float(product), T_obs=1.0
    )
    modes = build_mode_set(spec)
    matrix, info = modal_covariance_matrix(spec, modes)
    stats = asymptote_deviation_stats(spec, modes, matrix)

    amps = modal_projection_ensemble(
        spec, modes, realizations=REALIZATIONS, master_seed=7,
        record_length=2.0 * spec.T_obs,
    )
    empirical = (amps.conj().T @ amps / REALIZATIONS).real

    print(
        f"{product:>6d} {stats['max_dev_interior']:>19.5f} {stats['allowed_dev']:>13.5f} "
        f"{stats['edge_mode_values'][0]:>10.5f} {empirical[0, 0]:>11.5f}"
    )

print(
    "\nInterior deviations sit near 0.05*n0 and shrink with the band-time"
    "\nproduct, comfortably inside 5*n0/(dnu*T).  The edge mode stays at"
    "\n~n0/2 in both routes -- a property of the sharp filter edge, which is"
    "\nwhy the independent-thermal-modes picture applies to the band interior."
)
