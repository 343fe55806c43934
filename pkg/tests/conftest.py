"""Shared fixtures and independent oracle helpers."""

import numpy as np
import pytest

from qaccel.bloch import BlochFrame
from qaccel.dynamics import bloch_to_state, field_to_operator
from qaccel.opsalg import HermitianOperator, StateVector

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_hermitian_matrix(rng, dim):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (m + m.conj().T)


def random_state_vector(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(v)


def random_unit_vector(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def random_frame(rng, h0=0.0, scale=2.0):
    """Random qubit frame: unit Bloch vector, O(scale) field and derivative."""
    return BlochFrame(
        a=random_unit_vector(rng),
        h=scale * rng.standard_normal(3),
        hdot=scale * rng.standard_normal(3),
        h0=h0,
    )


def frame_operators(frame):
    """Operator-side data for a frame: (H, dH/dt, psi)."""
    h_op = field_to_operator(frame.h0, frame.h)
    hd_op = field_to_operator(0.0, frame.hdot)
    psi = bloch_to_state(frame.a)
    return h_op, hd_op, psi


def naive_expectation(matrix, amplitudes):
    """Double-loop <psi|M|psi>, independent of the library's linear algebra."""
    total = 0.0 + 0.0j
    n = len(amplitudes)
    for i in range(n):
        for j in range(n):
            total += np.conj(amplitudes[i]) * matrix[i][j] * amplitudes[j]
    return total


def pauli_operator(matrix):
    return HermitianOperator(matrix)
