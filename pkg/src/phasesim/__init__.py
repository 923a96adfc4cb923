"""Numerical engine for generalized phase-space mechanics."""

from .grid import (
    PhaseGrid,
    PhaseField,
    make_grid,
    integrate,
    translate,
    switch_transform,
    p_reflect,
    mode_transform,
    inverse_mode_transform,
)
from .states import (
    Wavefunction,
    ho_wavefunction,
    wigner_of_wavefunction,
    wigner_of_position_kernel,
    weyl_position_kernel,
    ho_wigner_closed_form,
    gaussian_state,
    coherent_state,
    ring_state,
    mixture,
)
from .duality import (
    Effect,
    inner_product,
    state_volume,
    state_dual_effect,
    born_probability,
    completeness_defect,
    symmetry_invariance_suite,
)
from .star import (
    poisson_bracket,
    sine_bracket,
    star_product,
    brute_force_sine_bracket,
    spectral_derivative,
    taper_value,
    taper_derivative,
    taper_profile,
    windowed_observable,
    interior_mask,
)
from .dynamics import (
    DynamicsKernel,
    EigenstateEntry,
    EigenstateSet,
    SeparableHamiltonian,
    LiouvillianOperator,
    Trajectory,
    generator_apply,
    assemble_liouvillian,
    j_condition_checks,
    stationarity_residual,
    evolve,
)
from .energy import (
    assemble_hamiltonian,
    energy_expectation,
    eigenvalue_from_coefficient,
    ho_eigenstate_set,
    classical_ring_family,
)
from .errors import (
    PhasesimError,
    ValidationError,
    GridMismatchError,
    InstabilityError,
    FormatError,
)

__version__ = "0.1.0"
