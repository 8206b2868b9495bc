"""Large-size leading terms of the step objective and their critical points.

For large set sizes the objective is dominated by a single trigonometric
term.  Two regimes matter: a uniform-superposition start before the first
step, where the leading term is ``cos(phi - psi) - cos(phi) - cos(psi)``,
and a mid-course state whose success probability is of order f(size)/size,
where it reduces further to ``cos(phi - psi) - cos(phi)``.  In both regimes
the matched pair (pi, pi) is the unique local maximum among the critical
points, which is why plain phase matching stays optimal until the
probability gets close to one.

The critical points are known in closed form, so they are hard coded with
exact rational Hessians; the analytic gradient and Hessian evaluators exist
to verify them, and ``convergence_check`` confirms empirically that the full
objective's optimum approaches (pi, pi) as the size grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .objective import ObjectiveContext
from .optimizer import OptimizerConfig, optimize_phases
from .core import wrap_angle

REGIME_HADAMARD = "hadamard_first_step"
REGIME_ORDER_F = "order_fN_over_N"

_PI = math.pi
_THIRD_PI = math.pi / 3.0


@dataclass(frozen=True)
class CriticalPoint:
    """A stationary point of a leading term, with its second-order data.

    ``hessian`` is ordered with phi first:
    ``[[d2/dphi2, d2/dphi dpsi], [d2/dphi dpsi, d2/dpsi2]]``.
    """

    phi: float
    psi: float
    hessian: np.ndarray
    kind: str

    def __post_init__(self) -> None:
        hessian = np.array(self.hessian, dtype=float)
        hessian.flags.writeable = False
        object.__setattr__(self, "hessian", hessian)


def hadamard_leading_term(phi: float, psi: float) -> float:
    """Leading term for the first step from a uniform superposition."""
    return math.cos(phi - psi) - math.cos(phi) - math.cos(psi)


def midcourse_leading_term(phi: float, psi: float) -> float:
    """Leading term when the success probability is of order f(size)/size."""
    return math.cos(phi - psi) - math.cos(phi)


def hadamard_leading_gradient(phi: float, psi: float) -> tuple[float, float]:
    """(d/dphi, d/dpsi) of the uniform-start leading term."""
    sin_diff = math.sin(phi - psi)
    return -sin_diff + math.sin(phi), sin_diff + math.sin(psi)


def midcourse_leading_gradient(phi: float, psi: float) -> tuple[float, float]:
    """(d/dphi, d/dpsi) of the mid-course leading term."""
    sin_diff = math.sin(phi - psi)
    return -sin_diff + math.sin(phi), sin_diff


def hadamard_leading_hessian(phi: float, psi: float) -> np.ndarray:
    cos_diff = math.cos(phi - psi)
    return np.array(
        [
            [-cos_diff + math.cos(phi), cos_diff],
            [cos_diff, -cos_diff + math.cos(psi)],
        ]
    )


def midcourse_leading_hessian(phi: float, psi: float) -> np.ndarray:
    cos_diff = math.cos(phi - psi)
    return np.array(
        [
            [-cos_diff + math.cos(phi), cos_diff],
            [cos_diff, -cos_diff],
        ]
    )


def classify_hessian(hessian: np.ndarray, tol: float = 1e-12) -> str:
    """Second-derivative test by eigenvalue signs: local_max, local_min or saddle."""
    low, high = np.linalg.eigvalsh(np.asarray(hessian, dtype=float))
    if high < -tol:
        return "local_max"
    if low > tol:
        return "local_min"
    if low < -tol < tol < high:
        return "saddle"
    raise ValueError(f"degenerate Hessian, eigenvalues ({low!r}, {high!r})")


def hadamard_critical_points() -> list[CriticalPoint]:
    """All six critical points of the uniform-start leading term on the torus.

    Angles outside (-pi, pi] are stored wrapped, so the pair of minima sits
    at (pi/3, -pi/3) and (-pi/3, pi/3).
    """
    return [
        CriticalPoint(0.0, 0.0, [[0.0, 1.0], [1.0, 0.0]], "saddle"),
        CriticalPoint(0.0, _PI, [[2.0, -1.0], [-1.0, 0.0]], "saddle"),
        CriticalPoint(_PI, 0.0, [[0.0, -1.0], [-1.0, 2.0]], "saddle"),
        CriticalPoint(_PI, _PI, [[-2.0, 1.0], [1.0, -2.0]], "local_max"),
        CriticalPoint(_THIRD_PI, -_THIRD_PI, [[1.0, -0.5], [-0.5, 1.0]], "local_min"),
        CriticalPoint(-_THIRD_PI, _THIRD_PI, [[1.0, -0.5], [-0.5, 1.0]], "local_min"),
    ]


def midcourse_critical_points() -> list[CriticalPoint]:
    """All four critical points of the mid-course leading term on the torus."""
    return [
        CriticalPoint(0.0, 0.0, [[0.0, 1.0], [1.0, -1.0]], "saddle"),
        CriticalPoint(0.0, _PI, [[2.0, -1.0], [-1.0, 1.0]], "local_min"),
        CriticalPoint(_PI, 0.0, [[0.0, -1.0], [-1.0, 1.0]], "saddle"),
        CriticalPoint(_PI, _PI, [[-2.0, 1.0], [1.0, -1.0]], "local_max"),
    ]


def _alpha_for(size: int, regime: str, growth: Callable[[int], float] | None) -> float:
    if size < 2 or size & (size - 1):
        raise ValueError(f"sizes must be powers of two >= 2, got {size}")
    if regime == REGIME_HADAMARD:
        return math.asin(1.0 / math.sqrt(size))
    if regime == REGIME_ORDER_F:
        if growth is None:
            raise ValueError(f"regime {REGIME_ORDER_F!r} needs a growth function")
        probability = growth(size) / size
        if not 0.0 < probability < 1.0:
            raise ValueError(
                f"growth({size})/{size} = {probability!r} must lie in (0, 1)"
            )
        return math.asin(math.sqrt(probability))
    raise ValueError(f"unknown regime {regime!r}")


def convergence_check(
    sizes: Sequence[int],
    regime: str,
    growth: Callable[[int], float] | None = None,
    cfg: OptimizerConfig | None = None,
) -> list[tuple[int, float]]:
    """Distance of the full objective's optimum from (pi, pi) per set size.

    For each size, the amplitude angle is set by the regime (uniform start:
    ``asin(1/sqrt(size))``; order-f regime: ``asin(sqrt(growth(size)/size))``),
    the full objective is optimized, and the wrapped Euclidean distance of the
    canonical optimum from the matched pair is recorded.  As the size grows
    the distances should shrink toward zero, which is the checkable form of
    the leading-term analysis.
    """
    results = []
    for size in sizes:
        alpha = _alpha_for(size, regime, growth)
        result = optimize_phases(ObjectiveContext(alpha, size), cfg)
        distance = math.hypot(
            wrap_angle(result.best.psi - _PI), wrap_angle(result.best.phi - _PI)
        )
        results.append((size, distance))
    return results
