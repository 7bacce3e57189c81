"""Radial mean-field equilibria on the unit ball, spectra of their
nonlocal linearization, generalized nodal domains, and matrix inertia
certificates."""

from .numerics import (
    EigenDecomposition,
    RadialGrid,
    SymMatrix,
    ball_volume,
    gen_sym_eigen,
    integrate_ivp,
    surface_area,
    sym_eigen,
    weighted_integral,
)
from .solver import (
    Exponential,
    Free,
    MfeProblem,
    Pinned,
    Positive,
    Power,
    RadialSolution,
    Vanishing,
    WeightProfile,
    build_weight,
    solve,
)
from .spectral import (
    ModeOperator,
    ModeSpectrum,
    assemble,
    dirichlet_first,
    radial_simplicity_check,
    radiality_check,
    solve_modes,
)
from .nodal import (
    NodalReport,
    SingularPoint,
    analyze_eigenfunction,
    classify_singular,
    count_domains,
    find_zeros,
    fit_vanishing_order,
    hopf_sign_check,
    verify_bounds,
    weighted_averages,
)
from .inertia import (
    AverageVector,
    InertiaReport,
    build_A,
    build_B,
    build_B_reduced,
    closed_form_minor,
    det_via_mdl,
    inertia_of,
    interlacing_check,
    leading_minors,
    negative_eigenvalue_certificate,
    random_average_vector,
)
from . import errors

__version__ = "0.1.0"
