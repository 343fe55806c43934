"""Operator algebra and pure-state statistics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaccel.errors import DimensionError, HermiticityError, NormError
from qaccel.opsalg import (
    ExpectationContext,
    HermitianOperator,
    StateVector,
    anticommutator_expectation,
    commutator_expectation,
    covariance,
    expectation,
    symmetrized_product,
    variance,
    variance_info,
)

from conftest import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    naive_expectation,
    random_hermitian_matrix,
    random_state_vector,
)

KET0 = StateVector([1.0, 0.0])
PLUS = StateVector([1.0, 1.0])


class TestStateVector:
    def test_normalizes_on_construction(self):
        psi = StateVector([3.0, 4.0])
        assert abs(np.linalg.norm(psi.amplitudes) - 1.0) < 1e-12
        assert psi.amplitudes[0] == pytest.approx(0.6)

    def test_rejects_dimension_below_two(self):
        with pytest.raises(DimensionError):
            StateVector([1.0])

    def test_rejects_zero_vector(self):
        with pytest.raises(NormError):
            StateVector([0.0, 0.0])

    def test_amplitudes_are_read_only(self):
        psi = StateVector([1.0, 0.0])
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 0.5

    def test_fidelity_ignores_global_phase(self):
        psi = StateVector([1.0, 1.0j])
        phased = StateVector(np.exp(0.7j) * psi.amplitudes)
        assert psi.fidelity(phased) == pytest.approx(1.0, abs=1e-14)


class TestHermitianOperator:
    def test_accepts_and_symmetrizes(self):
        op = HermitianOperator(SIGMA_X + 5e-13 * np.array([[0, 1j], [0, 0]]))
        assert np.max(np.abs(op.matrix - op.matrix.conj().T)) == 0.0

    def test_rejects_non_hermitian(self):
        with pytest.raises(HermiticityError):
            HermitianOperator([[0.0, 1.0], [0.0, 0.0]])

    def test_rejects_non_square(self):
        with pytest.raises(DimensionError):
            HermitianOperator(np.zeros((2, 3)))

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 6))
    def test_closure_under_sum_scaling_and_symmetrized_product(self, seed, dim):
        rng = np.random.default_rng(seed)
        a = HermitianOperator(random_hermitian_matrix(rng, dim))
        b = HermitianOperator(random_hermitian_matrix(rng, dim))
        for op in (a + b, a - b, 2.5 * a, a * -0.3, symmetrized_product(a, b)):
            assert np.max(np.abs(op.matrix - op.matrix.conj().T)) == 0.0


class TestExpectation:
    def test_sigma_z_on_pole_state(self):
        assert expectation(HermitianOperator(SIGMA_Z), KET0) == pytest.approx(1.0)

    def test_sigma_z_on_plus_state(self):
        assert expectation(HermitianOperator(SIGMA_Z), PLUS) == pytest.approx(0.0, abs=1e-15)

    def test_matches_naive_double_loop(self, rng):
        for _ in range(25):
            op = HermitianOperator(random_hermitian_matrix(rng, 3))
            psi = random_state_vector(rng, 3)
            want = naive_expectation(op.matrix, psi.amplitudes)
            assert abs(want.imag) < 1e-12
            assert expectation(op, psi) == pytest.approx(want.real, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            expectation(HermitianOperator(SIGMA_Z), StateVector([1, 0, 0]))


class TestVariance:
    def test_sigma_z_on_plus(self):
        assert variance(HermitianOperator(SIGMA_Z), PLUS) == pytest.approx(1.0)

    def test_eigenstate_has_zero_variance(self):
        assert variance(HermitianOperator(SIGMA_Z), KET0) == 0.0

    def test_three_level_hand_value(self):
        # <H> = 4/3, <H^2> = 10/3 on the uniform state: variance = 14/9
        op = HermitianOperator(np.diag([0.0, 1.0, 3.0]))
        psi = StateVector([1.0, 1.0, 1.0])
        assert variance(op, psi) == pytest.approx(14.0 / 9.0, abs=1e-14)

    def test_clamp_reports_and_zeroes_negative_raw(self, rng):
        # eigenstates of a random observable drive the raw difference to ~0
        op = HermitianOperator(random_hermitian_matrix(rng, 4))
        w, v = np.linalg.eigh(op.matrix)
        res = variance_info(op, StateVector(v[:, 2]))
        assert res.value >= 0.0
        assert res.raw <= res.value
        if res.clamped:
            assert res.raw < 0.0

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 8))
    def test_preclamp_negativity_below_1e12(self, seed, dim):
        rng = np.random.default_rng(seed)
        op = HermitianOperator(random_hermitian_matrix(rng, dim))
        psi = random_state_vector(rng, dim)
        res = variance_info(op, psi)
        assert res.raw >= -1e-12
        assert res.value >= 0.0


class TestCovariance:
    def test_self_covariance_is_variance(self):
        op = HermitianOperator(SIGMA_Z)
        assert covariance(op, op, PLUS) == pytest.approx(variance(op, PLUS), abs=1e-15)

    def test_anticommuting_pair_on_pole(self):
        cov = covariance(HermitianOperator(SIGMA_X), HermitianOperator(SIGMA_Y), KET0)
        assert cov == pytest.approx(0.0, abs=1e-15)

    def test_matches_recomposition_from_expectations(self, rng):
        for _ in range(25):
            a = HermitianOperator(random_hermitian_matrix(rng, 4))
            b = HermitianOperator(random_hermitian_matrix(rng, 4))
            psi = random_state_vector(rng, 4)
            want = (
                expectation(symmetrized_product(a, b), psi)
                - expectation(a, psi) * expectation(b, psi)
            )
            assert covariance(a, b, psi) == pytest.approx(want, abs=1e-12)

    def test_symmetry_is_exact(self, rng):
        for _ in range(25):
            a = HermitianOperator(random_hermitian_matrix(rng, 5))
            b = HermitianOperator(random_hermitian_matrix(rng, 5))
            psi = random_state_vector(rng, 5)
            assert covariance(a, b, psi) == covariance(b, a, psi)


class TestCommutatorExpectation:
    def test_pauli_pair_on_pole(self):
        val = commutator_expectation(HermitianOperator(SIGMA_X), HermitianOperator(SIGMA_Y), KET0)
        assert val == pytest.approx(2.0j, abs=1e-14)

    def test_self_commutator_vanishes(self, rng):
        a = HermitianOperator(random_hermitian_matrix(rng, 3))
        psi = random_state_vector(rng, 3)
        assert commutator_expectation(a, a, psi) == 0.0

    def test_matches_direct_oracle(self, rng):
        for _ in range(25):
            a = HermitianOperator(random_hermitian_matrix(rng, 4))
            b = HermitianOperator(random_hermitian_matrix(rng, 4))
            psi = random_state_vector(rng, 4)
            direct = naive_expectation(a.matrix @ b.matrix - b.matrix @ a.matrix, psi.amplitudes)
            got = commutator_expectation(a, b, psi)
            assert got.real == 0.0
            assert got.imag == pytest.approx(direct.imag, abs=1e-12)
            assert abs(direct.real) < 1e-12


class TestAnticommutatorExpectation:
    def test_pauli_pair_on_pole(self):
        val = anticommutator_expectation(
            HermitianOperator(SIGMA_X), HermitianOperator(SIGMA_Y), KET0
        )
        assert val == pytest.approx(0.0, abs=1e-14)

    def test_self_anticommutator_is_twice_square(self):
        op = HermitianOperator(SIGMA_Z)
        assert anticommutator_expectation(op, op, KET0) == pytest.approx(2.0)

    def test_matches_direct_oracle(self, rng):
        for _ in range(25):
            a = HermitianOperator(random_hermitian_matrix(rng, 4))
            b = HermitianOperator(random_hermitian_matrix(rng, 4))
            psi = random_state_vector(rng, 4)
            direct = naive_expectation(a.matrix @ b.matrix + b.matrix @ a.matrix, psi.amplitudes)
            assert anticommutator_expectation(a, b, psi) == pytest.approx(direct.real, abs=1e-12)


def test_variance_rate_equals_twice_covariance(rng):
    """d/ds Var(H(s)) == 2 cov(H, H') along a smooth operator family,
    with the central difference converging at second order."""
    a = random_hermitian_matrix(rng, 4)
    b = random_hermitian_matrix(rng, 4)
    c = random_hermitian_matrix(rng, 4)
    psi = random_state_vector(rng, 4)

    def ham(s):
        return HermitianOperator(a + s * b + 0.5 * s * s * c)

    def ham_dot(s):
        return HermitianOperator(b + s * c)

    s0 = 0.3
    analytic = 2.0 * covariance(ham(s0), ham_dot(s0), psi)
    errs = []
    for ds in (1e-3, 5e-4):
        fd = (variance(ham(s0 + ds), psi) - variance(ham(s0 - ds), psi)) / (2.0 * ds)
        errs.append(abs(fd - analytic))
    assert errs[0] < 1e-4
    assert errs[1] < errs[0]
    assert errs[0] / max(errs[1], 1e-14) == pytest.approx(4.0, rel=0.35)


def test_expectation_context_binds_state(rng):
    a = HermitianOperator(random_hermitian_matrix(rng, 3))
    b = HermitianOperator(random_hermitian_matrix(rng, 3))
    psi = random_state_vector(rng, 3)
    ctx = ExpectationContext(psi)
    assert ctx.expectation(a) == expectation(a, psi)
    assert ctx.variance(a) == variance(a, psi)
    assert ctx.covariance(a, b) == covariance(a, b, psi)
    assert ctx.commutator_expectation(a, b) == commutator_expectation(a, b, psi)
    assert ctx.anticommutator_expectation(a, b) == anticommutator_expectation(a, b, psi)
