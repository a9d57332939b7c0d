"""Numerical toolkit for a damped, forced lattice of coupled oscillators:
periodic-wrap truncations, quasi-periodic forcing with exact shift flow,
energy and tail estimates, and attractor cloud comparison."""

from .attractor import (
    AttractorCloud,
    ConvergenceReport,
    TailCertificateReport,
    convergence_study,
    hausdorff_semidistance,
    invariance_defect,
    sample_attractor,
    tail_certificate,
)
from .dynamics import (
    LatticeParams,
    Nonlinearity,
    Trajectory,
    cocycle_property_check,
    integrate,
    make_finite_rhs,
    make_nonlinearity,
    make_reference_rhs,
    max_stable_step,
    rhs_finite,
    rhs_reference,
)
from .estimates import (
    AbsorbingBall,
    absorbing_ball,
    burn_in_time,
    calibrate_tail_index,
    cutoff_eval,
    gronwall_bound,
    tail_mass,
    verify_energy_decay,
)
from .forcing import (
    QuasiPeriodicForcing,
    bebutov_distance,
    equicontinuity_modulus,
    forcing_from_config,
)
from .operators import (
    apply_difference,
    apply_laplacian,
    difference_matrix,
    embed,
    laplacian_matrix,
    project_forcing,
    wrap_forcing,
)
from .state import PaddedState

__version__ = "0.1.0"

__all__ = [
    "AbsorbingBall",
    "AttractorCloud",
    "ConvergenceReport",
    "LatticeParams",
    "Nonlinearity",
    "PaddedState",
    "QuasiPeriodicForcing",
    "TailCertificateReport",
    "Trajectory",
    "absorbing_ball",
    "apply_difference",
    "apply_laplacian",
    "bebutov_distance",
    "burn_in_time",
    "calibrate_tail_index",
    "cocycle_property_check",
    "convergence_study",
    "cutoff_eval",
    "difference_matrix",
    "embed",
    "equicontinuity_modulus",
    "forcing_from_config",
    "gronwall_bound",
    "hausdorff_semidistance",
    "integrate",
    "invariance_defect",
    "laplacian_matrix",
    "make_finite_rhs",
    "make_nonlinearity",
    "make_reference_rhs",
    "max_stable_step",
    "project_forcing",
    "rhs_finite",
    "rhs_reference",
    "sample_attractor",
    "tail_certificate",
    "tail_mass",
    "verify_energy_decay",
    "wrap_forcing",
]
