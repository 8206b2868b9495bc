"""Full statevector simulator for the generalized Grover iterate.

This is the brute-force side of the artifact: it applies the actual
length-``2**n`` operators (target phase rotation, transform, zero-state phase
rotation, transform, overall sign) so trajectories can be checked against the
reduced two-dimensional model amplitude-for-amplitude.

The transform is the +/-1 kernel ``2**(-n/2) * (-1)**(i.j)`` (binary dot
product of the index bits), applied with the O(N log N) butterfly; it is its
own inverse.  States are plain complex numpy vectors of unit norm; all
functions return fresh arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .core import ComplexPair, PhasePair


class AsymmetricStateError(ValueError):
    """The non-target amplitudes are not all equal, so the state cannot be
    pooled into the two-dimensional model (a symmetric start evolved by the
    iterate never trips this)."""


def _qubit_count(size: int) -> int:
    if size < 2 or size & (size - 1):
        raise ValueError(f"state length must be a power of two >= 2, got {size}")
    return size.bit_length() - 1


def uniform_state(n: int) -> np.ndarray:
    """The length-``2**n`` uniform superposition (what a Hadamard layer prepares)."""
    size = 1 << n
    return np.full(size, 1.0 / math.sqrt(size), dtype=complex)


def walsh_hadamard(state: np.ndarray) -> np.ndarray:
    """Apply the self-inverse +/-1 transform via the fast butterfly."""
    out = np.array(state, dtype=complex)
    n = _qubit_count(out.size)
    half = 1
    while half < out.size:
        blocks = out.reshape(-1, 2, half)
        top = blocks[:, 0, :] + blocks[:, 1, :]
        bottom = blocks[:, 0, :] - blocks[:, 1, :]
        out = np.stack((top, bottom), axis=1).reshape(-1)
        half *= 2
    return out * 2.0 ** (-0.5 * n)


def phase_oracle(state: np.ndarray, index: int, angle: float) -> np.ndarray:
    """Rotate the amplitude at ``index`` by ``angle`` radians; others untouched."""
    if not 0 <= index < state.size:
        raise ValueError(f"index {index} outside [0, {state.size - 1}]")
    out = np.array(state, dtype=complex)
    out[index] *= np.exp(1j * angle)
    return out


def full_iterate(state: np.ndarray, phases: PhasePair, target: int) -> np.ndarray:
    """One generalized Grover step on the full state.

    Order of application: oracle rotation on the target by phi, transform,
    rotation on index 0 by psi, transform, overall factor -1.
    """
    out = phase_oracle(state, target, phases.phi)
    out = walsh_hadamard(out)
    out = phase_oracle(out, 0, phases.psi)
    out = walsh_hadamard(out)
    return -out


def reduce_state(state: np.ndarray, target: int, tol: float = 1e-10) -> ComplexPair:
    """Pool a symmetric full state into the two-dimensional amplitude pair.

    Returns ``(a_target, sqrt(size - 1) * a_common)`` where ``a_common`` is
    the shared non-target amplitude.  The tolerance is slightly looser than
    the norm checks to absorb butterfly rounding at twelve qubits.
    """
    if not 0 <= target < state.size:
        raise ValueError(f"target {target} outside [0, {state.size - 1}]")
    rest = np.delete(np.asarray(state, dtype=complex), target)
    common = rest.mean()
    deviation = float(np.abs(rest - common).max())
    if deviation > tol:
        raise AsymmetricStateError(
            f"not symmetric: non-target amplitudes spread {deviation:.3e} "
            f"exceeds {tol:g}; the state left the reduced subspace"
        )
    return ComplexPair(complex(state[target]), complex(math.sqrt(rest.size) * common))
