"""Quantum Cramér-Rao sensitivity floor for thermal-source radiometry.

The library models a band-filtered thermal source, derives the quantum
limit on the relative sensitivity of any unbiased estimator of its
photon flux (or temperature), and verifies by simulation that concrete
receivers -- photon counting, heterodyne radiometry, and two-detector
intensity correlation -- obey it.
"""
from .constants import CONSTANTS, H_PLANCK, K_BOLTZMANN, PhysicalConstants
from .estimators import (
    EstimatorKind,
    ExperimentConfig,
    SensitivityReport,
    run_experiment,
    run_heterodyne,
    run_photon_counting,
    run_two_detector,
    sample_mode_amplitudes,
)
from .fisher import (
    BoundReport,
    CompetitorCurves,
    SLDOperator,
    bound_report,
    competitor_sensitivities,
    drho_dn0,
    lyapunov_residual,
    qfi_numeric,
    qfi_single_mode,
    qfi_total,
    refutation_summary,
    sld_analytic,
    sld_numeric,
)
from .modal import (
    AppendixQuadratureConfig,
    GaussianStateDescriptor,
    ModeSet,
    QuadratureConvergenceError,
    assemble_covariance,
    build_mode_set,
    modal_covariance_asymptotic,
    modal_covariance_matrix,
    modal_covariance_numeric,
    thermal_covariance,
)
from .physics import (
    ApproximationWarning,
    CorrelationKernel,
    SourceSpec,
    coherence_time,
    correlation_kernel_eval,
    mode_count,
    planck_occupation,
    rayleigh_jeans_occupation,
)
from .states import (
    MultimodeThermalState,
    TruncatedDensityOperator,
    characteristic_function,
    multimode_state,
    thermal_density_operator,
)
from .synthesis import FieldRealization, project_onto_modes, synthesize_field

__version__ = "0.1.0"
