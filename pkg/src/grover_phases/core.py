"""Reduced two-dimensional dynamics of the generalized Grover iteration.

A search over ``2**n`` elements with a single marked element never leaves the
two-dimensional subspace spanned by the target and the normalized pool of all
non-target elements.  This module models exactly that subspace: the canonical
state (amplitude angle plus relative phase), the 2x2 unitary describing one
iteration with independent oracle and diffusion phase rotations, and the
success probability after a step.

All types are immutable values and all operations are pure functions, so
everything here is safe to use concurrently without synchronization.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

#: Tolerance for unit-norm and unitarity checks on constructed values.
NORM_TOL = 1e-12


def wrap_angle(angle: float) -> float:
    """Map an angle (radians) into the canonical interval (-pi, pi]."""
    wrapped = math.remainder(angle, TWO_PI)
    if wrapped <= -math.pi:
        wrapped += TWO_PI
    return wrapped


@dataclass(frozen=True)
class SearchSpace:
    """Unstructured search space of ``2**n`` elements with one marked index.

    Parameters
    ----------
    n : int
        Qubit count; the space holds ``2**n`` elements.
    target : int
        Index of the marked element, in ``[0, 2**n - 1]``.
    """

    n: int
    target: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")
        if not 0 <= self.target < self.size:
            raise ValueError(
                f"target {self.target} outside [0, {self.size - 1}]"
            )

    @property
    def size(self) -> int:
        """Number of elements, always an exact power of two."""
        return 1 << self.n

    @classmethod
    def from_size(cls, size: int, target: int = 0) -> "SearchSpace":
        """Build from the element count, validating it is a power of two."""
        if size < 2 or size & (size - 1):
            raise ValueError(f"size must be a power of two >= 2, got {size}")
        return cls(size.bit_length() - 1, target)


@dataclass(frozen=True)
class PhasePair:
    """One step's phase rotations: diffusion phase ``psi``, oracle phase ``phi``.

    Both angles are stored wrapped into (-pi, pi].
    """

    psi: float
    phi: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "psi", wrap_angle(self.psi))
        object.__setattr__(self, "phi", wrap_angle(self.phi))

    def negated(self) -> "PhasePair":
        """The symmetric twin (-psi, -phi); the step objective is even under it."""
        return PhasePair(-self.psi, -self.phi)


@dataclass(frozen=True)
class ReducedState:
    """Canonical reduced state, materialized as ``[e^{i theta} sin(alpha), cos(alpha)]``.

    ``alpha`` in [0, pi/2] fixes the target probability ``sin(alpha)**2``;
    ``theta`` is the relative phase between the target amplitude and the
    (real, non-negative) pooled non-target amplitude.
    """

    alpha: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        if not -1e-12 <= self.alpha <= HALF_PI + 1e-12:
            raise ValueError(f"alpha must lie in [0, pi/2], got {self.alpha}")
        object.__setattr__(self, "alpha", min(max(self.alpha, 0.0), HALF_PI))
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    def as_pair(self) -> "ComplexPair":
        """Materialize the two complex amplitudes (target, pooled rest)."""
        return ComplexPair(
            cmath.exp(1j * self.theta) * math.sin(self.alpha),
            complex(math.cos(self.alpha)),
        )


@dataclass(frozen=True)
class ComplexPair:
    """Raw amplitude pair (target, pooled rest); must have unit norm."""

    a_target: complex
    a_rest: complex

    def __post_init__(self) -> None:
        norm_sq = (
            self.a_target.real ** 2
            + self.a_target.imag ** 2
            + self.a_rest.real ** 2
            + self.a_rest.imag ** 2
        )
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"amplitude pair is not normalized: |.|^2 = {norm_sq!r}")


@dataclass(frozen=True)
class IterateMatrix:
    """2x2 complex matrix of one generalized Grover step; checked unitary."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=complex)
        if entries.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {entries.shape}")
        defect = np.abs(entries.conj().T @ entries - np.eye(2)).max()
        if defect > NORM_TOL:
            raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)


def hadamard_init(space: SearchSpace) -> ReducedState:
    """Uniform-superposition start: ``sin(alpha) = 1/sqrt(size)``, real amplitudes."""
    return ReducedState(alpha=math.asin(1.0 / math.sqrt(space.size)), theta=0.0)


def iterate_matrix(phases: PhasePair, space: SearchSpace) -> IterateMatrix:
    """One-step 2x2 unitary for diffusion phase ``psi`` and oracle phase ``phi``.

    Setting ``psi == phi`` recovers the single-phase iterate, and
    ``psi == phi == pi`` the classical Grover step.
    """
    size = space.size
    e_phi = cmath.exp(1j * phases.phi)
    one_minus = 1.0 - cmath.exp(1j * phases.psi)
    root = math.sqrt(size - 1.0)
    return IterateMatrix(
        np.array(
            [
                [e_phi * (one_minus / size - 1.0), root / size * one_minus],
                [
                    root / size * e_phi * one_minus,
                    -(1.0 / size + (1.0 - 1.0 / size) * cmath.exp(1j * phases.psi)),
                ],
            ]
        )
    )


def step_pair(pair: ComplexPair, phases: PhasePair, space: SearchSpace) -> ComplexPair:
    """Raw matrix product of one step, with no global-phase normalization.

    This is the form to compare against a full statevector simulation, where
    global phases must agree exactly.
    """
    m = iterate_matrix(phases, space).entries
    return ComplexPair(
        m[0, 0] * pair.a_target + m[0, 1] * pair.a_rest,
        m[1, 0] * pair.a_target + m[1, 1] * pair.a_rest,
    )


def canonical_state(pair: ComplexPair) -> ReducedState:
    """Extract the canonical state from a raw amplitude pair.

    The global phase is factored out so the pooled amplitude becomes real and
    non-negative.  When the pooled amplitude is exactly zero (target
    probability one) the relative phase is meaningless and is set to 0.
    """
    mag_rest = abs(pair.a_rest)
    if mag_rest == 0.0:
        return ReducedState(alpha=HALF_PI, theta=0.0)
    a_target = pair.a_target * (pair.a_rest.conjugate() / mag_rest)
    return ReducedState(
        alpha=math.atan2(abs(a_target), mag_rest),
        theta=cmath.phase(a_target),
    )


def apply_iterate(state: ReducedState, phases: PhasePair, space: SearchSpace) -> ReducedState:
    """Apply one generalized Grover step and return the canonical new state."""
    return canonical_state(step_pair(state.as_pair(), phases, space))


def target_probability(state: ReducedState) -> float:
    """Probability of observing the target: ``sin(alpha)**2``."""
    return math.sin(state.alpha) ** 2


def one_step_probability(state: ReducedState, phases: PhasePair, space: SearchSpace) -> float:
    """Target probability after one step, in closed form.

    The state's relative phase is absorbed into the oracle phase (only their
    sum enters the target amplitude), so this equals
    ``target_probability(apply_iterate(state, phases, space))``.
    """
    size = space.size
    one_minus = 1.0 - cmath.exp(1j * phases.psi)
    f = cmath.exp(1j * (phases.phi + state.theta)) * (one_minus / size - 1.0) * math.sin(
        state.alpha
    ) + math.sqrt(size - 1.0) / size * one_minus * math.cos(state.alpha)
    return f.real**2 + f.imag**2
