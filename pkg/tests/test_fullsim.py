"""Tests for the full statevector simulator and its reduction."""

import math

import numpy as np
import pytest

from grover_phases.core import PhasePair, SearchSpace, hadamard_init, step_pair
from grover_phases.fullsim import (
    AsymmetricStateError,
    full_iterate,
    phase_oracle,
    reduce_state,
    uniform_state,
    walsh_hadamard,
)

PI = math.pi


def dense_transform(n: int) -> np.ndarray:
    """Reference +/-1 kernel built entry by entry from the binary dot product."""
    size = 1 << n
    rows = np.arange(size)
    signs = np.array([[(-1) ** int(i & j).bit_count() for j in rows] for i in rows])
    return signs * 2.0 ** (-n / 2)


def random_unit(rng, size) -> np.ndarray:
    v = rng.normal(size=size) + 1j * rng.normal(size=size)
    return v / np.linalg.norm(v)


class TestWalshHadamard:
    def test_basis_zero_maps_to_uniform(self):
        basis = np.zeros(4, dtype=complex)
        basis[0] = 1.0
        assert np.abs(walsh_hadamard(basis) - 0.5).max() < 1e-15

    def test_uniform_maps_back_to_basis_zero(self):
        out = walsh_hadamard(uniform_state(2))
        expected = np.zeros(4, dtype=complex)
        expected[0] = 1.0
        assert np.abs(out - expected).max() < 1e-12

    @pytest.mark.parametrize("n", [1, 3, 6, 9, 12])
    def test_involution(self, n):
        rng = np.random.default_rng(40 + n)
        v = random_unit(rng, 1 << n)
        assert np.abs(walsh_hadamard(walsh_hadamard(v)) - v).max() < 1e-12

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_matches_dense_reference(self, n):
        rng = np.random.default_rng(50 + n)
        dense = dense_transform(n)
        for _ in range(5):
            v = random_unit(rng, 1 << n)
            assert np.abs(walsh_hadamard(v) - dense @ v).max() < 1e-12

    def test_norm_preserved(self):
        rng = np.random.default_rng(60)
        v = random_unit(rng, 1 << 10)
        assert abs(np.linalg.norm(walsh_hadamard(v)) - 1.0) < 1e-12

    def test_rejects_bad_length(self):
        with pytest.raises(ValueError):
            walsh_hadamard(np.ones(3, dtype=complex))


class TestPhaseOracle:
    def test_zero_angle_is_identity(self):
        rng = np.random.default_rng(61)
        v = random_unit(rng, 8)
        assert np.array_equal(phase_oracle(v, 3, 0.0), v)

    def test_pi_negates_target_entry(self):
        v = uniform_state(3)
        out = phase_oracle(v, 5, PI)
        assert out[5] == pytest.approx(-v[5], abs=1e-15)
        mask = np.arange(8) != 5
        assert np.array_equal(out[mask], v[mask])

    def test_phases_add(self):
        rng = np.random.default_rng(62)
        v = random_unit(rng, 16)
        angle = 0.7341
        twice = phase_oracle(phase_oracle(v, 9, angle), 9, angle)
        assert np.abs(twice - phase_oracle(v, 9, 2 * angle)).max() < 1e-12

    def test_index_checked(self):
        with pytest.raises(ValueError):
            phase_oracle(uniform_state(2), 4, 0.1)


class TestFullIterate:
    def test_exact_single_step_search(self):
        state = full_iterate(uniform_state(2), PhasePair(PI, PI), target=2)
        assert abs(state[2]) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_published_classical_trace(self):
        state = uniform_state(5)
        for expected in (0.2583, 0.6024, 0.8969):
            state = full_iterate(state, PhasePair(PI, PI), target=11)
            assert abs(state[11]) ** 2 == pytest.approx(expected, abs=5e-5)

    def test_zero_phases_negate_state(self):
        rng = np.random.default_rng(63)
        v = random_unit(rng, 32)
        assert np.abs(full_iterate(v, PhasePair(0.0, 0.0), 7) + v).max() < 1e-12

    def test_norm_preserved(self):
        rng = np.random.default_rng(64)
        for n in (2, 6, 12):
            v = random_unit(rng, 1 << n)
            phases = PhasePair(rng.uniform(-PI, PI), rng.uniform(-PI, PI))
            out = full_iterate(v, phases, target=int(rng.integers(1 << n)))
            assert abs(np.linalg.norm(out) - 1.0) < 1e-12


class TestReduceState:
    def test_uniform_state(self):
        for n in (2, 5, 10):
            size = 1 << n
            pair = reduce_state(uniform_state(n), target=size // 3)
            assert pair.a_target == pytest.approx(1.0 / math.sqrt(size), abs=1e-15)
            assert pair.a_rest == pytest.approx(math.sqrt((size - 1.0) / size), abs=1e-15)

    def test_symmetry_kept_along_trajectories(self):
        rng = np.random.default_rng(65)
        for n in (3, 7):
            target = int(rng.integers(1 << n))
            state = uniform_state(n)
            for _ in range(8):
                phases = PhasePair(rng.uniform(-PI, PI), rng.uniform(-PI, PI))
                state = full_iterate(state, phases, target)
                reduce_state(state, target)  # must not raise

    def test_perturbed_state_rejected(self):
        state = uniform_state(4)
        state[3] += 1e-6
        state /= np.linalg.norm(state)
        with pytest.raises(AsymmetricStateError):
            reduce_state(state, target=0)

    def test_error_is_value_error(self):
        assert issubclass(AsymmetricStateError, ValueError)

    def test_target_checked(self):
        with pytest.raises(ValueError):
            reduce_state(uniform_state(2), target=4)


class TestReducedEquivalence:
    @pytest.mark.parametrize("n", [2, 5, 9])
    def test_trajectories_agree_with_reduced_model(self, n):
        rng = np.random.default_rng(70 + n)
        space = SearchSpace(n, int(rng.integers(1 << n)))
        full = uniform_state(n)
        pair = hadamard_init(space).as_pair()
        for _ in range(8):
            phases = PhasePair(rng.uniform(-PI, PI), rng.uniform(-PI, PI))
            full = full_iterate(full, phases, space.target)
            pair = step_pair(pair, phases, space)
            reduced = reduce_state(full, space.target)
            assert abs(reduced.a_target - pair.a_target) < 1e-10
            assert abs(reduced.a_rest - pair.a_rest) < 1e-10

    def test_probability_agreement(self):
        rng = np.random.default_rng(80)
        space = SearchSpace(6, 17)
        full = uniform_state(6)
        pair = hadamard_init(space).as_pair()
        for _ in range(5):
            phases = PhasePair(rng.uniform(-PI, PI), rng.uniform(-PI, PI))
            full = full_iterate(full, phases, space.target)
            pair = step_pair(pair, phases, space)
            assert abs(abs(full[space.target]) ** 2 - abs(pair.a_target) ** 2) < 1e-12
