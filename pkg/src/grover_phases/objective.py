"""Closed-form objective for choosing one step's phase pair.

The target probability after one step splits into a part that is constant in
the phases and a phase-dependent gain.  Scaling the gain by ``size**2`` gives
a trigonometric polynomial in (psi, phi) whose maximizer is the optimal phase
pair for the current amplitude angle; that scaled form is what the optimizer
works with.  Analytic first and second derivatives are provided for
refinement and for finite-difference cross-checks.

The older single-phase objective (both rotations sharing one angle, with the
state's relative phase entering explicitly) is kept for comparison; on real
states it agrees with the two-phase objective restricted to the diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import HALF_PI, PhasePair


@dataclass(frozen=True)
class ObjectiveContext:
    """What the one-step objective is conditioned on: amplitude angle and set size."""

    alpha: float
    size: int

    def __post_init__(self) -> None:
        if not -1e-12 <= self.alpha <= HALF_PI + 1e-12:
            raise ValueError(f"alpha must lie in [0, pi/2], got {self.alpha}")
        object.__setattr__(self, "alpha", min(max(self.alpha, 0.0), HALF_PI))
        if self.size < 2:
            raise ValueError(f"size must be >= 2, got {self.size}")


@dataclass(frozen=True)
class Decomposition:
    """One-step probability split into phase-independent and phase-dependent parts.

    ``constant + gain`` is the full probability.  The three auxiliary terms
    are the pieces the probability assembles from before simplification:
    ``target_term`` multiplies ``sin(alpha)**2``, ``rest_term`` multiplies
    ``(size-1) * cos(alpha)**2`` and ``cross_term`` multiplies
    ``sqrt(size-1) * sin(2*alpha)``, each divided by ``size**2``.
    """

    constant: float
    gain: float
    target_term: float
    rest_term: float
    cross_term: float

    @property
    def probability(self) -> float:
        return self.constant + self.gain


def _coefficients(ctx: ObjectiveContext) -> tuple[float, float, float]:
    """Coefficients (a, b, c) so the objective is
    ``a*(cos(phi-psi)-cos(phi)) + b*cos(psi) + c*(cos(phi+psi)-cos(phi))``."""
    sin2a = math.sin(2.0 * ctx.alpha)
    cos2a = math.cos(2.0 * ctx.alpha)
    m = ctx.size - 1
    return m**1.5 * sin2a, -2.0 * m * cos2a, -math.sqrt(m) * sin2a


def _objective(coeffs: tuple[float, float, float], psi: float, phi: float) -> float:
    a, b, c = coeffs
    cos_phi = math.cos(phi)
    return (
        a * (math.cos(phi - psi) - cos_phi)
        + b * math.cos(psi)
        + c * (math.cos(phi + psi) - cos_phi)
    )


def _gradient(coeffs: tuple[float, float, float], psi: float, phi: float) -> tuple[float, float]:
    a, b, c = coeffs
    sin_diff = math.sin(phi - psi)
    sin_sum = math.sin(phi + psi)
    sin_phi = math.sin(phi)
    d_psi = a * sin_diff - b * math.sin(psi) - c * sin_sum
    d_phi = a * (sin_phi - sin_diff) + c * (sin_phi - sin_sum)
    return d_psi, d_phi


def _hessian(
    coeffs: tuple[float, float, float], psi: float, phi: float
) -> tuple[float, float, float]:
    """Second derivatives (d2/dpsi2, d2/dpsi dphi, d2/dphi2)."""
    a, b, c = coeffs
    cos_diff = math.cos(phi - psi)
    cos_sum = math.cos(phi + psi)
    cos_phi = math.cos(phi)
    h_pp = -a * cos_diff - b * math.cos(psi) - c * cos_sum
    h_pf = a * cos_diff - c * cos_sum
    h_ff = a * (cos_phi - cos_diff) + c * (cos_phi - cos_sum)
    return h_pp, h_pf, h_ff


def phase_objective(ctx: ObjectiveContext, phases: PhasePair) -> float:
    """Scaled phase-dependent part of the one-step probability.

    Equals ``size**2`` times the gain; maximizing it over (psi, phi) in
    [-pi, pi]^2 maximizes the post-step target probability.
    """
    return _objective(_coefficients(ctx), phases.psi, phases.phi)


def decompose_probability(ctx: ObjectiveContext, phases: PhasePair) -> Decomposition:
    """Split the one-step probability into its constant and phase-dependent parts."""
    size = ctx.size
    m = size - 1
    sin_a_sq = math.sin(ctx.alpha) ** 2
    cos_psi = math.cos(phases.psi)
    cos_phi = math.cos(phases.phi)
    return Decomposition(
        constant=((size - 2) ** 2 * sin_a_sq + 2.0 * m) / size**2,
        gain=phase_objective(ctx, phases) / size**2,
        target_term=m**2 + 1.0 + 2.0 * m * cos_psi,
        rest_term=2.0 * (1.0 - cos_psi),
        cross_term=m * (math.cos(phases.phi - phases.psi) - cos_phi)
        - (math.cos(phases.phi + phases.psi) - cos_phi),
    )


def phase_objective_gradient(ctx: ObjectiveContext, phases: PhasePair) -> tuple[float, float]:
    """Analytic partials of the phase objective, ordered (d/dpsi, d/dphi)."""
    return _gradient(_coefficients(ctx), phases.psi, phases.phi)


def phase_objective_hessian(ctx: ObjectiveContext, phases: PhasePair) -> tuple[float, float, float]:
    """Analytic second partials, ordered (d2/dpsi2, d2/dpsi dphi, d2/dphi2)."""
    return _hessian(_coefficients(ctx), phases.psi, phases.phi)


def single_phase_objective(ctx: ObjectiveContext, theta: float, phi: float) -> float:
    """Older objective with both rotations sharing the angle ``phi``.

    ``theta`` is the state's relative phase; it shifts the oracle rotation.
    For ``theta == 0`` the argmax over ``phi`` coincides with the argmax of
    the two-phase objective along its diagonal ``psi == phi`` (the two differ
    by a positive scale and an additive constant).  Kept for comparison with
    the matched-phase approach.
    """
    sin2a = math.sin(2.0 * ctx.alpha)
    cos2a = math.cos(2.0 * ctx.alpha)
    size = ctx.size
    shifted = math.cos(phi + theta)
    return (math.sqrt(size - 1.0) / size * cos2a + sin2a / size * shifted) * (
        1.0 - math.cos(phi)
    ) - 0.5 * sin2a * shifted
