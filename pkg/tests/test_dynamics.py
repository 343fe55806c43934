"""Propagation, Bloch maps, and the time-field plumbing."""

import math

import numpy as np
import pytest

from qaccel.dynamics import (
    TimeField,
    bloch_propagate,
    bloch_to_state,
    evolve_bloch,
    evolve_state,
    field_to_operator,
    propagate,
    state_to_bloch,
)
from qaccel.errors import DimensionError, HermiticityError, NormError, StepError
from qaccel.opsalg import StateVector

from conftest import SIGMA_Z, random_hermitian_matrix, random_unit_vector

PLUS = StateVector([1.0, 1.0])


def constant_field(matrix):
    return TimeField(hamiltonian_at=lambda t: matrix)


class TestFieldToOperator:
    def test_unit_z_field_is_sigma_z(self):
        op = field_to_operator(0.0, [0.0, 0.0, 1.0])
        assert np.allclose(op.matrix, SIGMA_Z)

    def test_pure_trace_part_is_identity(self):
        op = field_to_operator(1.0, [0.0, 0.0, 0.0])
        assert np.allclose(op.matrix, np.eye(2))

    def test_general_entries_and_trace(self):
        h0, h = 0.7, np.array([0.2, -0.4, 1.1])
        op = field_to_operator(h0, h)
        want = np.array(
            [[h0 + h[2], h[0] - 1j * h[1]], [h[0] + 1j * h[1], h0 - h[2]]]
        )
        assert np.allclose(op.matrix, want, atol=1e-15)
        assert np.trace(op.matrix).real == pytest.approx(2.0 * h0)


class TestBlochMaps:
    def test_pole_and_equator_states(self):
        assert np.allclose(state_to_bloch(StateVector([1.0, 0.0])), [0, 0, 1])
        assert np.allclose(state_to_bloch(PLUS), [1, 0, 0], atol=1e-15)

    def test_tilted_reference_state(self):
        a = state_to_bloch(StateVector([math.sqrt(3) / 2.0, 0.5]))
        assert np.allclose(a, [math.sqrt(3) / 2.0, 0.0, 0.5], atol=1e-15)

    def test_rejects_higher_dimensions(self):
        with pytest.raises(DimensionError):
            state_to_bloch(StateVector([1.0, 0.0, 0.0]))

    def test_inverse_poles(self):
        north = bloch_to_state([0.0, 0.0, 1.0])
        assert np.allclose(north.amplitudes, [1.0, 0.0])
        south = bloch_to_state([0.0, 0.0, -1.0])
        assert np.allclose(south.amplitudes, [0.0, 1.0])

    def test_inverse_equator(self):
        psi = bloch_to_state([1.0, 0.0, 0.0])
        assert np.allclose(psi.amplitudes, np.array([1.0, 1.0]) / math.sqrt(2.0))

    def test_rejects_non_unit_vector(self):
        with pytest.raises(NormError):
            bloch_to_state([0.0, 0.0, 0.5])

    def test_round_trip_on_random_directions(self, rng):
        for _ in range(200):
            a = random_unit_vector(rng)
            back = state_to_bloch(bloch_to_state(a))
            assert np.max(np.abs(back - a)) < 1e-10

    def test_representative_has_real_nonnegative_first_amplitude(self, rng):
        for _ in range(50):
            psi = bloch_to_state(random_unit_vector(rng))
            assert psi.amplitudes[0].imag == 0.0
            assert psi.amplitudes[0].real >= 0.0


class TestPropagate:
    def test_constant_sigma_z_closed_form(self):
        field = constant_field(SIGMA_Z)
        t = 1.3
        got = propagate(field, PLUS, 0.0, t, 1e-3)
        want = StateVector([np.exp(-1j * t), np.exp(1j * t)])
        assert 1.0 - got.fidelity(want) < 1e-8

    def test_zero_field_is_identity(self, rng):
        field = constant_field(np.zeros((3, 3)))
        psi = StateVector(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        got = propagate(field, psi, 0.0, 2.0, 1e-2)
        assert 1.0 - got.fidelity(psi) < 1e-12

    def test_step_errors(self):
        field = constant_field(SIGMA_Z)
        with pytest.raises(StepError):
            propagate(field, PLUS, 0.0, 1.0, -0.1)
        with pytest.raises(StepError):
            propagate(field, PLUS, 1.0, 0.5, 1e-3)
        with pytest.raises(StepError):
            propagate(field, PLUS, 0.0, 0.5, 0.7)

    def test_non_hermitian_sample_raises(self):
        field = TimeField(hamiltonian_at=lambda t: np.array([[0.0, 1.0], [0.0, 0.0]]))
        with pytest.raises(HermiticityError):
            propagate(field, PLUS, 0.0, 1.0, 0.1)

    def test_unitarity_drift_stays_tiny(self, rng):
        # |h| up to 10, dt = 1e-3: per-step drift before renormalization
        h = 10.0 * random_unit_vector(rng)

        def ham(t):
            return field_to_operator(0.0, np.cos(t) * h)

        res = evolve_state(TimeField(hamiltonian_at=ham), PLUS, 0.0, 1.0, 1e-3)
        assert res.max_norm_drift < 1e-10

    def test_dense_path_matches_two_level_path(self, rng):
        # embed a qubit field in a 3-level space with a decoupled level
        h = rng.standard_normal(3)

        def ham2(t):
            return field_to_operator(0.0, np.sin(t + 0.3) * h)

        def ham3(t):
            m = np.zeros((3, 3), dtype=complex)
            m[:2, :2] = ham2(t).matrix
            m[2, 2] = 7.0
            return m

        psi2 = propagate(TimeField(hamiltonian_at=ham2), PLUS, 0.0, 1.0, 1e-3)
        psi3 = propagate(
            TimeField(hamiltonian_at=ham3),
            StateVector([1.0, 1.0, 0.0]),
            0.0, 1.0, 1e-3,
        )
        overlap = np.vdot(psi3.amplitudes[:2], psi2.amplitudes)
        assert abs(overlap) == pytest.approx(1.0, abs=1e-10)


class TestBlochPropagate:
    def test_rotation_about_z(self):
        t = 0.9
        a = bloch_propagate(lambda s: [0.0, 0.0, 1.0], [1.0, 0.0, 0.0], 0.0, t, 1e-3)
        want = np.array([math.cos(2.0 * t), math.sin(2.0 * t), 0.0])
        assert np.max(np.abs(a - want)) < 1e-8

    def test_field_parallel_to_bloch_vector_is_stationary(self):
        a0 = np.array([0.0, 0.0, 1.0])
        a = bloch_propagate(lambda s: [0.0, 0.0, 3.0], a0, 0.0, 2.0, 1e-2)
        assert np.max(np.abs(a - a0)) < 1e-12

    def test_rejects_non_unit_start(self):
        with pytest.raises(NormError):
            bloch_propagate(lambda s: [0.0, 0.0, 1.0], [0.0, 0.0, 0.5], 0.0, 1.0, 1e-2)

    def test_step_errors(self):
        with pytest.raises(StepError):
            bloch_propagate(lambda s: [0, 0, 1.0], [0, 0, 1.0], 0.0, 1.0, 0.0)
        with pytest.raises(StepError):
            bloch_propagate(lambda s: [0, 0, 1.0], [0, 0, 1.0], 0.0, 0.5, 0.7)

    def test_norm_preserved_along_trajectory(self, rng):
        h = rng.standard_normal(3)
        res = evolve_bloch(lambda t: np.sin(t) * h, random_unit_vector(rng), 0.0, 3.0, 1e-3)
        assert res.max_norm_drift < 1e-12
        assert abs(np.linalg.norm(res.bloch) - 1.0) < 1e-12


def test_state_and_bloch_dynamics_agree(rng):
    """The two pictures of the same dynamics coincide through the Bloch map."""
    c = rng.standard_normal(3)
    d = rng.standard_normal(3)

    def h_of_t(t):
        return c + np.sin(1.3 * t + 0.2) * d

    def ham(t):
        return field_to_operator(0.0, h_of_t(t))

    psi0 = StateVector(rng.standard_normal(2) + 1j * rng.standard_normal(2))
    a0 = state_to_bloch(psi0)
    psi1 = propagate(TimeField(hamiltonian_at=ham), psi0, 0.0, 1.0, 1e-3)
    a1 = bloch_propagate(h_of_t, a0, 0.0, 1.0, 1e-3)
    assert np.max(np.abs(state_to_bloch(psi1) - a1)) < 1e-6


def test_backward_evolution_inverts_forward(rng):
    h = rng.standard_normal(3)

    def ham(t):
        return field_to_operator(0.0, np.cos(2.0 * t) * h)

    field = TimeField(hamiltonian_at=ham)
    psi0 = StateVector(rng.standard_normal(2) + 1j * rng.standard_normal(2))
    forward = evolve_state(field, psi0, 0.0, 0.7, 1e-3).state
    back = evolve_state(field, forward, 0.7, 0.0, 1e-3).state
    assert 1.0 - back.fidelity(psi0) < 1e-12


class TestTimeFieldDerivative:
    def test_analytic_derivative_is_used(self):
        field = TimeField(
            hamiltonian_at=lambda t: t * SIGMA_Z,
            derivative_at=lambda t: SIGMA_Z,
        )
        assert np.allclose(field.derivative_operator_at(3.0).matrix, SIGMA_Z)

    def test_central_difference_second_order(self, rng):
        a = random_hermitian_matrix(rng, 3)
        b = random_hermitian_matrix(rng, 3)

        def ham(t):
            return a * math.cos(t) + b * math.sin(2.0 * t)

        def ham_dot(t):
            return -a * math.sin(t) + 2.0 * b * math.cos(2.0 * t)

        t0 = 0.4
        errs = []
        for step in (1e-3, 5e-4):
            field = TimeField(hamiltonian_at=ham, fd_step=step)
            err = np.max(np.abs(field.derivative_operator_at(t0).matrix - ham_dot(t0)))
            errs.append(err)
        assert errs[0] / max(errs[1], 1e-16) == pytest.approx(4.0, rel=0.3)

    def test_rejects_nonpositive_fd_step(self):
        with pytest.raises(StepError):
            TimeField(hamiltonian_at=lambda t: SIGMA_Z, fd_step=0.0)


def test_convergence_is_second_order(rng):
    """Halving dt cuts the propagation error by ~4x."""
    c = rng.standard_normal(3)
    d = rng.standard_normal(3)

    def ham(t):
        return field_to_operator(0.0, c + np.sin(t) * d)

    field = TimeField(hamiltonian_at=ham)
    psi0 = StateVector([1.0, 0.5 + 0.2j])
    reference = propagate(field, psi0, 0.0, 1.0, 1e-5)
    errs = []
    for dt in (4e-3, 2e-3):
        got = propagate(field, psi0, 0.0, 1.0, dt)
        errs.append(math.sqrt(max(0.0, 1.0 - got.fidelity(reference))))
    assert errs[0] / max(errs[1], 1e-16) == pytest.approx(4.0, rel=0.4)
