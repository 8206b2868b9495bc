"""Global optimization of the step objective over the phase torus.

The objective is a smooth trigonometric polynomial on [-pi, pi]^2, so a
coarse lattice scan reliably brackets the global maximum; candidates are then
sharpened by a guarded Newton ascent on the analytic gradient, with
Nelder-Mead backup runs for the nearly-flat ridge that appears where the
matched-phase optimum bifurcates.  An exhaustive lattice evaluator is kept as
an independent check on the optimizer.

Alpha sweeps reproduce the phase-matching picture: below a size-dependent
amplitude angle every optimal pair rounds to (pi, pi), and past it the two
phases take a nontrivial relationship.  ``detect_cutoff`` locates that
boundary row.

Everything is deterministic given the config's seed; sweep rows derive their
own seeds from (seed, row index), so evaluating rows in any order or in
parallel cannot change the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize as _nm_minimize

from .core import HALF_PI, PhasePair, wrap_angle
from .objective import ObjectiveContext, _coefficients, _gradient, _hessian, _objective

#: |sin(2 alpha)| below which the objective is treated as psi-only (see
#: optimize_phases notes on the degenerate endpoints).
_DEGENERATE_TOL = 1e-14

#: Gradient sup-norm under which a refinement start counts as converged.
_STATIONARY_TOL = 1e-6


class NoPhaseMatchedPrefixError(ValueError):
    """The sweep does not even start in the phase-matched regime."""


@dataclass(frozen=True)
class OptimizerConfig:
    """Tuning knobs for the global phase search.

    ``coarse_grid`` points per axis seed the search, ``restarts`` extra random
    starts guard against a missed basin, and refinement stops once the
    objective is resolved to ``refine_tol``.
    """

    coarse_grid: int = 181
    restarts: int = 16
    refine_tol: float = 1e-10
    max_refine_iters: int = 500
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.coarse_grid < 3:
            raise ValueError(f"coarse_grid must be >= 3, got {self.coarse_grid}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.refine_tol <= 0:
            raise ValueError(f"refine_tol must be positive, got {self.refine_tol}")
        if self.rng_seed < 0:
            raise ValueError(f"rng_seed must be non-negative, got {self.rng_seed}")


@dataclass(frozen=True)
class OptimizationResult:
    """Canonical global maximizer of the step objective, with its twin.

    The objective is even under joint negation of both phases, so optima come
    in pairs; ``best`` is the representative with ``psi >= 0`` (ties broken
    toward ``phi >= 0``) and ``twin`` is its negation.
    """

    best: PhasePair
    twin: PhasePair
    objective_value: float
    post_probability: float
    starts_converged: int


@dataclass(frozen=True)
class SweepRow:
    """Optimal phases for one amplitude angle of an alpha sweep."""

    alpha: float
    psi_opt: float
    phi_opt: float
    probability_before: float
    probability_after: float


@dataclass(frozen=True)
class CutoffReport:
    """Where a sweep stops rounding to the matched pair (pi, pi)."""

    size: int
    alpha_cutoff: float
    probability_at_cutoff: float


@lru_cache(maxsize=4)
def _lattice(grid: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Axis angles plus the three context-independent cosine terms.

    Axis 0 runs over psi, axis 1 over phi; the objective on the lattice is
    then ``a*m_diff + b*m_psi + c*m_sum`` for context coefficients (a, b, c).
    """
    angles = np.linspace(-math.pi, math.pi, grid)
    psi = angles[:, None]
    phi = angles[None, :]
    cos_phi = np.cos(phi)
    m_diff = np.cos(phi - psi) - cos_phi
    m_psi = np.broadcast_to(np.cos(psi), (grid, grid)).copy()
    m_sum = np.cos(phi + psi) - cos_phi
    for arr in (angles, m_diff, m_psi, m_sum):
        arr.flags.writeable = False
    return angles, m_diff, m_psi, m_sum


def _grid_values(coeffs: tuple[float, float, float], grid: int) -> tuple[np.ndarray, np.ndarray]:
    angles, m_diff, m_psi, m_sum = _lattice(grid)
    a, b, c = coeffs
    return angles, a * m_diff + b * m_psi + c * m_sum


def _canonical(psi: float, phi: float) -> tuple[float, float]:
    psi, phi = wrap_angle(psi), wrap_angle(phi)
    if psi < 0.0 or (psi == 0.0 and phi < 0.0):
        psi, phi = wrap_angle(-psi), wrap_angle(-phi)
    return psi, phi


def _polish(
    coeffs: tuple[float, float, float], psi: float, phi: float, max_iters: int = 60
) -> tuple[float, float, float]:
    """Guarded Newton ascent from (psi, phi).

    Falls back to a curvature-scaled gradient step whenever the Hessian is
    not negative definite, so saddle points cannot attract the iteration
    from a non-stationary start.  Once objective differences drop below the
    evaluation noise a step is still accepted if it shrinks the gradient,
    which is what pins the stationary point in nearly-flat directions.
    """
    scale = sum(abs(k) for k in coeffs) + 1.0
    noise = 1e-13 * scale
    stationary = max(1e-13, 1e-14 * scale)
    value = _objective(coeffs, psi, phi)
    for _ in range(max_iters):
        g_psi, g_phi = _gradient(coeffs, psi, phi)
        g_norm = max(abs(g_psi), abs(g_phi))
        if g_norm <= stationary:
            break
        h_pp, h_pf, h_ff = _hessian(coeffs, psi, phi)
        det = h_pp * h_ff - h_pf * h_pf
        if det > 0.0 and h_pp < 0.0:
            d_psi = -(h_ff * g_psi - h_pf * g_phi) / det
            d_phi = -(h_pp * g_phi - h_pf * g_psi) / det
        else:
            curv = max(abs(h_pp), abs(h_pf), abs(h_ff), 1.0)
            d_psi, d_phi = g_psi / curv, g_phi / curv
        length = math.hypot(d_psi, d_phi)
        if length > 0.5:
            d_psi *= 0.5 / length
            d_phi *= 0.5 / length
        step = 1.0
        accepted = False
        for _ in range(30):
            new_psi = psi + step * d_psi
            new_phi = phi + step * d_phi
            candidate = _objective(coeffs, new_psi, new_phi)
            if candidate > value + noise:
                psi, phi, value = new_psi, new_phi, candidate
                accepted = True
                break
            if candidate >= value - noise:
                n_psi, n_phi = _gradient(coeffs, new_psi, new_phi)
                if max(abs(n_psi), abs(n_phi)) < 0.9 * g_norm:
                    psi, phi, value = new_psi, new_phi, candidate
                    accepted = True
                    break
            step *= 0.5
        if not accepted:
            break
    return value, psi, phi


def optimize_phases(ctx: ObjectiveContext, cfg: OptimizerConfig | None = None) -> OptimizationResult:
    """Find the global maximizer of the step objective over the phase torus.

    Procedure: evaluate the objective on a ``coarse_grid`` lattice, refine the
    top lattice cells plus ``restarts`` seeded random points by guarded Newton
    ascent, re-run the strongest candidates through Nelder-Mead to cover
    nearly-flat ridge directions, and keep the best.  The result dominates
    the coarse lattice by construction.

    At the endpoints ``sin(2*alpha) == 0`` the objective depends on psi only;
    the unidentifiable phi is reported as pi at alpha == 0 and 0 at
    alpha == pi/2 so the result stays deterministic and testable.
    """
    cfg = cfg or OptimizerConfig()
    coeffs = _coefficients(ctx)
    size = ctx.size

    if abs(math.sin(2.0 * ctx.alpha)) < _DEGENERATE_TOL:
        cos2a = math.cos(2.0 * ctx.alpha)
        best = PhasePair(math.pi, math.pi) if cos2a >= 0.0 else PhasePair(0.0, 0.0)
        value = 2.0 * (size - 1) * abs(cos2a)
        return _build_result(ctx, best, value, starts_converged=0)

    angles, grid_vals = _grid_values(coeffs, cfg.coarse_grid)
    flat = grid_vals.ravel()
    top_k = min(5, flat.size)
    top = np.argpartition(flat, flat.size - top_k)[flat.size - top_k :]
    top = top[np.argsort(flat[top])[::-1]]
    seeds = [
        (float(angles[i // cfg.coarse_grid]), float(angles[i % cfg.coarse_grid]))
        for i in top
    ]
    rng = np.random.default_rng(cfg.rng_seed)
    randoms = rng.uniform(-math.pi, math.pi, size=(cfg.restarts, 2))
    seeds += [(float(p), float(f)) for p, f in randoms]

    refined = []
    starts_converged = 0
    for psi0, phi0 in seeds:
        value, psi, phi = _polish(coeffs, psi0, phi0)
        refined.append((value, psi, phi))
        g_psi, g_phi = _gradient(coeffs, psi, phi)
        if max(abs(g_psi), abs(g_phi)) < _STATIONARY_TOL:
            starts_converged += 1
    best_value, best_psi, best_phi = max(refined)

    # Newton stalls where the ridge curvature nearly vanishes (the matched-
    # phase bifurcation); a few simplex runs from the strongest candidates
    # resolve that regime.
    scale = sum(abs(k) for k in coeffs) + 1.0
    nm_starts = [seeds[0], (best_psi, best_phi)] + seeds[top_k : top_k + 2]
    for start in nm_starts:
        res = _nm_minimize(
            lambda x: -_objective(coeffs, x[0], x[1]),
            np.asarray(start, dtype=float),
            method="Nelder-Mead",
            options={
                "xatol": 1e-9,
                "fatol": 1e-13 * scale,
                "maxiter": cfg.max_refine_iters,
                "maxfev": 2 * cfg.max_refine_iters,
            },
        )
        value, psi, phi = _polish(coeffs, float(res.x[0]), float(res.x[1]))
        if value > best_value:
            best_value, best_psi, best_phi = value, psi, phi

    best = PhasePair(*_canonical(best_psi, best_phi))
    value = _objective(coeffs, best.psi, best.phi)
    return _build_result(ctx, best, value, starts_converged)


def _build_result(
    ctx: ObjectiveContext, best: PhasePair, value: float, starts_converged: int
) -> OptimizationResult:
    size = ctx.size
    constant = ((size - 2) ** 2 * math.sin(ctx.alpha) ** 2 + 2.0 * (size - 1)) / size**2
    probability = min(max(constant + value / size**2, 0.0), 1.0)
    return OptimizationResult(
        best=best,
        twin=best.negated(),
        objective_value=value,
        post_probability=probability,
        starts_converged=starts_converged,
    )


def brute_force_phases(ctx: ObjectiveContext, grid: int) -> OptimizationResult:
    """Exhaustive lattice maximum of the step objective; oracle for the optimizer.

    Evaluates all ``grid * grid`` points of the inclusive lattice over
    [-pi, pi]^2 and returns the best, canonicalized like ``optimize_phases``.
    """
    if grid < 3:
        raise ValueError(f"grid must be >= 3, got {grid}")
    coeffs = _coefficients(ctx)
    angles, grid_vals = _grid_values(coeffs, grid)
    index = int(np.argmax(grid_vals))
    psi = float(angles[index // grid])
    phi = float(angles[index % grid])
    best = PhasePair(*_canonical(psi, phi))
    return _build_result(ctx, best, _objective(coeffs, best.psi, best.phi), 0)


def derive_seed(seed: int, index: int) -> int:
    """Deterministic per-row seed, so parallel evaluation cannot change output."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def sweep_alpha(size: int, num_points: int, cfg: OptimizerConfig | None = None) -> list[SweepRow]:
    """Optimal phases for evenly spaced amplitude angles over [0, pi/2].

    Both endpoints are included.  Row ``i`` uses a seed derived from
    ``(cfg.rng_seed, i)``, so the sweep is reproducible and row order is
    independent of evaluation order.
    """
    if num_points < 2:
        raise ValueError(f"num_points must be >= 2, got {num_points}")
    cfg = cfg or OptimizerConfig()
    rows = []
    for index, alpha in enumerate(np.linspace(0.0, HALF_PI, num_points)):
        alpha = float(alpha)
        result = optimize_phases(
            ObjectiveContext(alpha, size), replace(cfg, rng_seed=derive_seed(cfg.rng_seed, index))
        )
        rows.append(
            SweepRow(
                alpha=alpha,
                psi_opt=result.best.psi,
                phi_opt=result.best.phi,
                probability_before=math.sin(alpha) ** 2,
                probability_after=result.post_probability,
            )
        )
    return rows


def _rounds_to_pi(angle: float) -> bool:
    value = wrap_angle(angle)
    if value < 0.0:
        value += 2.0 * math.pi
    return round(value, 2) == 3.14


def phase_matched(phases: PhasePair) -> bool:
    """True when both phases round to 3.14 at two decimals.

    Angles are mapped to the positive branch first so values just below -pi
    wrap to just above +pi before rounding.
    """
    return _rounds_to_pi(phases.psi) and _rounds_to_pi(phases.phi)


def detect_cutoff(sweep: list[SweepRow], size: int) -> CutoffReport:
    """Locate the alpha where a sweep stops rounding to the matched pair.

    Returns the alpha of the first row whose rounded optimum is not (pi, pi);
    every row strictly below the cutoff is phase matched.  If the whole sweep
    is matched the last alpha is reported.  Raises if even the first row
    fails, since then there is no matched prefix to bound.
    """
    if not sweep:
        raise ValueError("sweep is empty")
    alphas = [row.alpha for row in sweep]
    if alphas != sorted(alphas):
        raise ValueError("sweep rows must be sorted by alpha")
    if not phase_matched(PhasePair(sweep[0].psi_opt, sweep[0].phi_opt)):
        raise NoPhaseMatchedPrefixError(
            f"no phase-matched prefix: first row (alpha={sweep[0].alpha!r}) "
            f"already rounds to ({sweep[0].psi_opt:.2f}, {sweep[0].phi_opt:.2f})"
        )
    alpha_cutoff = sweep[-1].alpha
    for row in sweep[1:]:
        if not phase_matched(PhasePair(row.psi_opt, row.phi_opt)):
            alpha_cutoff = row.alpha
            break
    return CutoffReport(
        size=size,
        alpha_cutoff=alpha_cutoff,
        probability_at_cutoff=math.sin(alpha_cutoff) ** 2,
    )
