"""Time-dependent Hamiltonians and norm-preserving propagation.

Two coupled pictures of the same qubit dynamics are supported, plus the
maps between them:

* State picture: ``i d|psi>/dt = H(t) |psi>`` (hbar = 1 throughout this
  module), integrated with a fixed-step exponential-midpoint rule. Each
  step applies the exact exponential of the Hamiltonian sampled at the
  midpoint of the step, so every step is unitary up to roundoff; the
  norm is restored after each step and the worst pre-restoration drift
  is reported.
* Bloch picture (two levels): ``da/dt = 2 h(t) x a`` for the Bloch
  vector ``a`` of the pure state and the field vector ``h`` of the
  traceless Hamiltonian part. Each step is an exact rotation about the
  midpoint field, again unitary by construction.

The qubit Hamiltonian convention is ``H = h0 * 1 + h . sigma`` where
``sigma`` are the Pauli matrices; ``state_to_bloch`` /
``bloch_to_state`` convert between the two pictures (the inverse fixes
the global phase by making the first amplitude real and non-negative).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DimensionError, NormError, StepError
from .opsalg import HermitianOperator, StateVector

DEFAULT_FD_STEP = 1e-6      # base step for finite-difference dH/dt
BLOCH_NORM_TOL = 1e-9       # |a| must be within this of 1


def field_to_operator(h0: float, h) -> HermitianOperator:
    """Qubit Hamiltonian ``h0 * 1 + h . sigma`` as a 2x2 matrix.

    Entries are ``[[h0 + hz, hx - i hy], [hx + i hy, h0 - hz]]``; the
    trace is ``2 h0``.
    """
    hx, hy, hz = (float(c) for c in np.asarray(h, dtype=float))
    h0 = float(h0)
    return HermitianOperator(
        [[h0 + hz, hx - 1j * hy], [hx + 1j * hy, h0 - hz]]
    )


def state_to_bloch(psi: StateVector) -> np.ndarray:
    """Bloch vector of a pure qubit state: rho = (1 + a . sigma) / 2.

    a = (2 Re(c0* c1), 2 Im(c0* c1), |c0|^2 - |c1|^2); unit norm to
    roundoff because psi is normalized.
    """
    if psi.dim != 2:
        raise DimensionError(f"Bloch vector needs a two-level state, got dim {psi.dim}")
    c0, c1 = psi.amplitudes
    cross = np.conj(c0) * c1
    return np.array([2.0 * cross.real, 2.0 * cross.imag, abs(c0) ** 2 - abs(c1) ** 2])


def bloch_to_state(a) -> StateVector:
    """Pure qubit state for a unit Bloch vector.

    The representative is fixed by taking the first amplitude real and
    non-negative; at the south pole (0, 0, -1), where that amplitude
    vanishes, the second amplitude is fixed to 1.
    """
    a = np.asarray(a, dtype=float).reshape(3)
    norm = np.linalg.norm(a)
    if abs(norm - 1.0) > BLOCH_NORM_TOL:
        raise NormError(f"Bloch vector norm {norm} is not 1 within {BLOCH_NORM_TOL}")
    x, y, z = a / norm
    c0 = math.sqrt(max(0.0, (1.0 + z) / 2.0))
    c1_mag = math.sqrt(max(0.0, (1.0 - z) / 2.0))
    phase = math.atan2(y, x)
    c1 = c1_mag * complex(math.cos(phase), math.sin(phase))
    return StateVector([c0, c1])


@dataclass(frozen=True)
class TimeField:
    """A time-parameterized Hamiltonian t -> H(t) with its derivative.

    ``hamiltonian_at`` may return a HermitianOperator or any array-like
    that passes the Hermiticity check. When ``derivative_at`` is absent,
    dH/dt is estimated by the central difference
    ``[H(t + d) - H(t - d)] / (2 d)`` with ``d = fd_step * max(1, |t|)``.
    Sampling callables must be reentrant.
    """

    hamiltonian_at: Callable[[float], object]
    derivative_at: Optional[Callable[[float], object]] = None
    fd_step: float = DEFAULT_FD_STEP

    def __post_init__(self) -> None:
        if not self.fd_step > 0.0:
            raise StepError(f"fd_step must be positive, got {self.fd_step}")

    def operator_at(self, t: float) -> HermitianOperator:
        """H(t), validated/symmetrized."""
        raw = self.hamiltonian_at(t)
        if isinstance(raw, HermitianOperator):
            return raw
        return HermitianOperator(raw)

    def derivative_operator_at(self, t: float) -> HermitianOperator:
        """dH/dt at time t (analytic if provided, else central difference)."""
        if self.derivative_at is not None:
            raw = self.derivative_at(t)
            if isinstance(raw, HermitianOperator):
                return raw
            return HermitianOperator(raw)
        delta = self.fd_step * max(1.0, abs(t))
        plus = self.operator_at(t + delta).matrix
        minus = self.operator_at(t - delta).matrix
        return HermitianOperator((plus - minus) / (2.0 * delta))

    @classmethod
    def from_vectors(
        cls,
        h_at: Callable[[float], object],
        hdot_at: Optional[Callable[[float], object]] = None,
        h0_at: Optional[Callable[[float], float]] = None,
        fd_step: float = DEFAULT_FD_STEP,
    ) -> "TimeField":
        """Qubit field from 3-vector callables: H = h0 * 1 + h . sigma.

        ``hdot_at`` gives dh/dt; the trace part's derivative is ignored
        in dH/dt only when ``h0_at`` is None. (All speed, acceleration
        and bound functionals are insensitive to the trace part anyway.)
        """

        def ham(t: float) -> HermitianOperator:
            h0 = h0_at(t) if h0_at is not None else 0.0
            return field_to_operator(h0, h_at(t))

        deriv = None
        if hdot_at is not None:
            def deriv(t: float) -> HermitianOperator:
                return field_to_operator(0.0, hdot_at(t))

        return cls(hamiltonian_at=ham, derivative_at=deriv, fd_step=fd_step)


@dataclass(frozen=True)
class PropagationResult:
    """Final state plus integration diagnostics."""

    state: StateVector
    max_norm_drift: float
    steps: int


@dataclass(frozen=True)
class BlochPropagationResult:
    """Final Bloch vector plus integration diagnostics."""

    bloch: np.ndarray
    max_norm_drift: float
    steps: int


def _apply_midpoint_2x2(mat: np.ndarray, c0: complex, c1: complex, dt: float):
    """exp(-i dt M) applied to (c0, c1) for Hermitian 2x2 M, in closed form.

    Splits M = m0 * 1 + K with traceless K; exp(-i dt M) =
    e^{-i dt m0} (cos(dt s) 1 - i sin(dt s)/s K), s = sqrt(det(-K)).
    """
    a = mat[0, 0].real
    d = mat[1, 1].real
    b = mat[0, 1]
    m0 = 0.5 * (a + d)
    kz = 0.5 * (a - d)
    s = math.sqrt(kz * kz + (b.real * b.real + b.imag * b.imag))
    phase = complex(math.cos(dt * m0), -math.sin(dt * m0))
    theta = dt * s
    if s < 1e-300:
        return phase * c0, phase * c1
    cos_t = math.cos(theta)
    sinc = math.sin(theta) / s
    n0 = (cos_t - 1j * sinc * kz) * c0 + (-1j * sinc * b) * c1
    n1 = (-1j * sinc * b.conjugate()) * c0 + (cos_t + 1j * sinc * kz) * c1
    return phase * n0, phase * n1


def _apply_midpoint_dense(mat: np.ndarray, amps: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i dt M) @ amps via eigendecomposition of Hermitian M."""
    w, v = np.linalg.eigh(mat)
    return v @ (np.exp(-1j * dt * w) * (v.conj().T @ amps))


def _plan_steps(t0: float, t1: float, dt: float) -> tuple[int, float]:
    """Number of steps and signed nominal step covering [t0, t1]."""
    span = t1 - t0
    signed = math.copysign(dt, span)
    n = max(1, math.ceil(abs(span) / dt - 1e-12))
    return n, signed


def evolve_state(
    field: TimeField, psi: StateVector, t0: float, t1: float, dt: float
) -> PropagationResult:
    """Integrate the state from t0 to t1 (either direction) with steps <= dt.

    Exponential midpoint per step; the final step is shortened to land
    exactly on t1. The norm is restored after every step.
    """
    if not dt > 0.0:
        raise StepError(f"dt must be positive, got {dt}")
    if t1 == t0:
        return PropagationResult(state=psi, max_norm_drift=0.0, steps=0)
    n, signed = _plan_steps(t0, t1, dt)
    amps = psi.amplitudes
    two_level = amps.size == 2
    if two_level:
        c0, c1 = complex(amps[0]), complex(amps[1])
    max_drift = 0.0
    for k in range(n):
        t_a = t0 + k * signed
        t_b = t1 if k == n - 1 else t0 + (k + 1) * signed
        step = t_b - t_a
        mat = field.operator_at(t_a + 0.5 * step).matrix
        if two_level:
            c0, c1 = _apply_midpoint_2x2(mat, c0, c1, step)
            norm = math.sqrt(
                c0.real * c0.real + c0.imag * c0.imag + c1.real * c1.real + c1.imag * c1.imag
            )
            max_drift = max(max_drift, abs(norm - 1.0))
            c0 /= norm
            c1 /= norm
        else:
            amps = _apply_midpoint_dense(mat, amps, step)
            norm = float(np.linalg.norm(amps))
            max_drift = max(max_drift, abs(norm - 1.0))
            amps = amps / norm
    final = StateVector([c0, c1]) if two_level else StateVector(amps)
    return PropagationResult(state=final, max_norm_drift=max_drift, steps=n)


def propagate(
    field: TimeField, psi0: StateVector, t0: float, t1: float, dt: float
) -> StateVector:
    """Forward-propagate |psi(t0)> = psi0 to time t1.

    Requires t1 > t0 and dt <= t1 - t0. The returned state carries an
    arbitrary global phase; compare against references via
    ``StateVector.fidelity``.
    """
    if not dt > 0.0:
        raise StepError(f"dt must be positive, got {dt}")
    if not t1 > t0:
        raise StepError(f"need t1 > t0, got [{t0}, {t1}]")
    if dt > (t1 - t0) * (1.0 + 1e-12):
        raise StepError(f"dt={dt} exceeds interval length {t1 - t0}")
    return evolve_state(field, psi0, t0, t1, dt).state


def _rotate(ax: float, ay: float, az: float, wx: float, wy: float, wz: float, dt: float):
    """Exact rotation of (ax, ay, az) about omega = (wx, wy, wz) by |omega| dt."""
    wn = math.sqrt(wx * wx + wy * wy + wz * wz)
    if wn < 1e-300:
        return ax, ay, az
    ux, uy, uz = wx / wn, wy / wn, wz / wn
    ang = wn * dt
    c, s = math.cos(ang), math.sin(ang)
    dot = ux * ax + uy * ay + uz * az
    cx = uy * az - uz * ay
    cy = uz * ax - ux * az
    cz = ux * ay - uy * ax
    k = dot * (1.0 - c)
    return (
        ax * c + cx * s + ux * k,
        ay * c + cy * s + uy * k,
        az * c + cz * s + uz * k,
    )


def evolve_bloch(
    h_of_t: Callable[[float], object], a0, t0: float, t1: float, dt: float
) -> BlochPropagationResult:
    """Integrate da/dt = 2 h(t) x a with per-step exact rotations.

    Each step rotates about 2 h sampled at the step midpoint; the norm
    is restored every step and the worst drift reported.
    """
    if not dt > 0.0:
        raise StepError(f"dt must be positive, got {dt}")
    a = np.asarray(a0, dtype=float).reshape(3)
    norm = np.linalg.norm(a)
    if abs(norm - 1.0) > BLOCH_NORM_TOL:
        raise NormError(f"Bloch vector norm {norm} is not 1 within {BLOCH_NORM_TOL}")
    ax, ay, az = (float(c) for c in a / norm)
    if t1 == t0:
        return BlochPropagationResult(bloch=np.array([ax, ay, az]), max_norm_drift=0.0, steps=0)
    n, signed = _plan_steps(t0, t1, dt)
    max_drift = 0.0
    for k in range(n):
        t_a = t0 + k * signed
        t_b = t1 if k == n - 1 else t0 + (k + 1) * signed
        step = t_b - t_a
        hx, hy, hz = (float(c) for c in np.asarray(h_of_t(t_a + 0.5 * step), dtype=float))
        ax, ay, az = _rotate(ax, ay, az, 2.0 * hx, 2.0 * hy, 2.0 * hz, step)
        norm = math.sqrt(ax * ax + ay * ay + az * az)
        max_drift = max(max_drift, abs(norm - 1.0))
        ax, ay, az = ax / norm, ay / norm, az / norm
    return BlochPropagationResult(bloch=np.array([ax, ay, az]), max_norm_drift=max_drift, steps=n)


def bloch_propagate(
    h_of_t: Callable[[float], object], a0, t0: float, t1: float, dt: float
) -> np.ndarray:
    """Forward-propagate the Bloch vector from t0 to t1 (t1 > t0)."""
    if not dt > 0.0:
        raise StepError(f"dt must be positive, got {dt}")
    if not t1 > t0:
        raise StepError(f"need t1 > t0, got [{t0}, {t1}]")
    if dt > (t1 - t0) * (1.0 + 1e-12):
        raise StepError(f"dt={dt} exceeds interval length {t1 - t0}")
    return evolve_bloch(h_of_t, a0, t0, t1, dt).bloch
