"""Optimal phase selection for the generalized Grover iteration.

The iteration applies an oracle phase rotation to the target, a transform,
a phase rotation on the zero state, the transform again and a sign flip.
This package models its exact two-dimensional reduction, optimizes the two
phases per step, analyzes the large-size critical points, and cross-checks
everything against a full statevector simulation.
"""

__version__ = "0.1.0"

from .core import (
    ComplexPair,
    IterateMatrix,
    PhasePair,
    ReducedState,
    SearchSpace,
    apply_iterate,
    canonical_state,
    hadamard_init,
    iterate_matrix,
    one_step_probability,
    step_pair,
    target_probability,
    wrap_angle,
)
from .objective import (
    Decomposition,
    ObjectiveContext,
    decompose_probability,
    phase_objective,
    phase_objective_gradient,
    phase_objective_hessian,
    single_phase_objective,
)
from .optimizer import (
    CutoffReport,
    NoPhaseMatchedPrefixError,
    OptimizationResult,
    OptimizerConfig,
    SweepRow,
    brute_force_phases,
    derive_seed,
    detect_cutoff,
    optimize_phases,
    phase_matched,
    sweep_alpha,
)
from .asymptotic import (
    REGIME_HADAMARD,
    REGIME_ORDER_F,
    CriticalPoint,
    classify_hessian,
    convergence_check,
    hadamard_critical_points,
    hadamard_leading_gradient,
    hadamard_leading_hessian,
    hadamard_leading_term,
    midcourse_critical_points,
    midcourse_leading_gradient,
    midcourse_leading_hessian,
    midcourse_leading_term,
)
from .fullsim import (
    AsymmetricStateError,
    full_iterate,
    phase_oracle,
    reduce_state,
    uniform_state,
    walsh_hadamard,
)

__all__ = [
    "__version__",
    "AsymmetricStateError",
    "ComplexPair",
    "CriticalPoint",
    "CutoffReport",
    "Decomposition",
    "IterateMatrix",
    "NoPhaseMatchedPrefixError",
    "ObjectiveContext",
    "OptimizationResult",
    "OptimizerConfig",
    "PhasePair",
    "ReducedState",
    "REGIME_HADAMARD",
    "REGIME_ORDER_F",
    "SearchSpace",
    "SweepRow",
    "apply_iterate",
    "brute_force_phases",
    "canonical_state",
    "classify_hessian",
    "convergence_check",
    "decompose_probability",
    "derive_seed",
    "detect_cutoff",
    "full_iterate",
    "hadamard_critical_points",
    "hadamard_init",
    "hadamard_leading_gradient",
    "hadamard_leading_hessian",
    "hadamard_leading_term",
    "iterate_matrix",
    "midcourse_critical_points",
    "midcourse_leading_gradient",
    "midcourse_leading_hessian",
    "midcourse_leading_term",
    "one_step_probability",
    "optimize_phases",
    "phase_matched",
    "phase_objective",
    "phase_objective_gradient",
    "phase_objective_hessian",
    "phase_oracle",
    "reduce_state",
    "single_phase_objective",
    "step_pair",
    "sweep_alpha",
    "target_probability",
    "uniform_state",
    "walsh_hadamard",
    "wrap_angle",
]
