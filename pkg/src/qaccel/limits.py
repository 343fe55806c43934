"""Evolution speed, acceleration, and the acceleration bounds.

For a state psi evolving under a nonstationary Hamiltonian H(t), the
speed of the evolution in projective Hilbert space is proportional to
the energy uncertainty,

    v(t) = (metric_factor / hbar) * sigma_H(t),

and the acceleration is its time derivative. Two standard conventions
for the proportionality are supported (see :class:`Convention`): the
factor-2 normalization with explicit hbar, and the unit-factor
normalization with hbar = 1. The two differ only by overall scale;
ratios of acceleration to bound, and saturation verdicts, coincide.

The acceleration is computed two independent ways:

* analytically, from the identity v * dv/dt = (metric_factor/hbar)^2 *
  cov(H, dH/dt), which gives a = (metric_factor/hbar) * cov / sigma_H;
* as a central finite difference of the speed along the exactly
  propagated trajectory (:func:`acceleration_fd`), which serves as the
  oracle for the analytic route.

Both bounds on |a| are provided:

    |a| <= bound_tight <= bound_loose = (metric_factor/hbar) * sigma_Hdot

with the tightened bound subtracting the commutator term
(metric_factor^2 / 4 hbar^2) |<[H, Hdot]>|^2 / sigma_H^2 under the
square root. Quantities that divide by sigma_H are refused (rather than
regularized) when sigma_H <= SIGMA_FLOOR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import opsalg
from .dynamics import TimeField, evolve_state
from .errors import DegenerateSpeedError
from .opsalg import StateVector

SIGMA_FLOOR = 1e-9        # energy units; below this sigma_H counts as zero
DEFAULT_FD_DT = 1e-4      # default step of the finite-difference oracle
_FD_SUBSTEP = 1e-3        # cap on a single propagation step inside the oracle


@dataclass(frozen=True)
class Convention:
    """Normalization of the projective-space line element.

    ``metric_factor`` is the proportionality between speed and energy
    uncertainty (2 in the factor-2 convention, 1 in the unit one);
    ``hbar`` is the explicit Planck constant (fixed to 1 in the unit
    convention). Use the presets :meth:`pati` / :meth:`alsing_cafaro`,
    or :meth:`custom` for anything else.
    """

    name: str
    metric_factor: float
    hbar: float

    def __post_init__(self) -> None:
        if not self.metric_factor > 0.0:
            raise ValueError(f"metric_factor must be positive, got {self.metric_factor}")
        if not self.hbar > 0.0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")

    @classmethod
    def pati(cls, hbar: float = 1.0) -> "Convention":
        """Factor-2 line element, explicit hbar: v = (2/hbar) sigma_H."""
        return cls(name="pati", metric_factor=2.0, hbar=hbar)

    @classmethod
    def alsing_cafaro(cls) -> "Convention":
        """Unit line element with hbar = 1: v = sigma_H."""
        return cls(name="alsing-cafaro", metric_factor=1.0, hbar=1.0)

    @classmethod
    def custom(cls, metric_factor: float, hbar: float = 1.0) -> "Convention":
        return cls(name="custom", metric_factor=metric_factor, hbar=hbar)

    @property
    def scale(self) -> float:
        """metric_factor / hbar: the speed per unit energy uncertainty."""
        return self.metric_factor / self.hbar


def sigma_h(field: TimeField, psi: StateVector, t: float) -> float:
    """Energy uncertainty sigma_H(t) = sqrt(Var(H(t)))."""
    return math.sqrt(opsalg.variance(field.operator_at(t), psi))


def speed(field: TimeField, psi: StateVector, t: float, conv: Convention) -> float:
    """Evolution speed v(t) = (metric_factor/hbar) sigma_H(t) >= 0."""
    return conv.scale * sigma_h(field, psi, t)


def acceleration_from_covariance(
    field: TimeField, psi: StateVector, t: float, conv: Convention
) -> float:
    """Analytic acceleration a(t) = (metric_factor/hbar) cov(H, Hdot)/sigma_H.

    Signed; may be negative. Raises DegenerateSpeedError when sigma_H is
    numerically zero (for an eigenstate the formula is undefined).
    """
    h_op = field.operator_at(t)
    s = math.sqrt(opsalg.variance(h_op, psi))
    if s <= SIGMA_FLOOR:
        raise DegenerateSpeedError(
            f"sigma_H = {s:.3e} <= {SIGMA_FLOOR}; acceleration undefined at t={t}"
        )
    cov = opsalg.covariance(h_op, field.derivative_operator_at(t), psi)
    return conv.scale * cov / s


def acceleration_fd(
    field: TimeField,
    psi: StateVector,
    t: float,
    dt: float = DEFAULT_FD_DT,
    conv: Convention = Convention.alsing_cafaro(),
) -> float:
    """Finite-difference acceleration [v(t+dt) - v(t-dt)] / (2 dt).

    ``psi`` is the state at time t; the neighbor states are obtained by
    exact (unitary-per-step) propagation forward and backward from t.
    Independent of the covariance route; converges to it at rate O(dt^2).
    """
    if not dt > 0.0:
        raise DegenerateSpeedError(f"fd step must be positive, got {dt}")
    sub = min(dt, _FD_SUBSTEP)
    plus = evolve_state(field, psi, t, t + dt, sub).state
    minus = evolve_state(field, psi, t, t - dt, sub).state
    v_plus = speed(field, plus, t + dt, conv)
    v_minus = speed(field, minus, t - dt, conv)
    return (v_plus - v_minus) / (2.0 * dt)


def fd_richardson(
    field: TimeField,
    psi: StateVector,
    t: float,
    dt: float = DEFAULT_FD_DT,
    conv: Convention = Convention.alsing_cafaro(),
) -> tuple[float, float, float]:
    """Oracle self-check: (a_fd(dt), a_fd(dt/2), convergence ratio).

    For a second-order scheme the ratio (a(dt) - a(dt/2)) /
    (a(dt/2) - a(dt/4)) is ~4. Returns nan for the ratio when the
    differences are at roundoff level.
    """
    a1 = acceleration_fd(field, psi, t, dt, conv)
    a2 = acceleration_fd(field, psi, t, dt / 2.0, conv)
    a4 = acceleration_fd(field, psi, t, dt / 4.0, conv)
    num, den = a1 - a2, a2 - a4
    ratio = num / den if abs(den) > 1e-14 * max(1.0, abs(a1)) else float("nan")
    return a1, a2, ratio


def bound_loose(field: TimeField, psi: StateVector, t: float, conv: Convention) -> float:
    """Fluctuation bound: |a| <= (metric_factor/hbar) sigma_Hdot."""
    return conv.scale * math.sqrt(opsalg.variance(field.derivative_operator_at(t), psi))


def bound_tight(field: TimeField, psi: StateVector, t: float, conv: Convention) -> float:
    """Commutator-tightened bound:

    bound_tight^2 = bound_loose^2
                    - (metric_factor^2 / 4 hbar^2) |<[H, Hdot]>|^2 / sigma_H^2,

    clipped at zero. Requires sigma_H > SIGMA_FLOOR.
    """
    h_op = field.operator_at(t)
    var_h = opsalg.variance(h_op, psi)
    if math.sqrt(var_h) <= SIGMA_FLOOR:
        raise DegenerateSpeedError(
            f"sigma_H = {math.sqrt(var_h):.3e} <= {SIGMA_FLOOR}; tight bound undefined at t={t}"
        )
    hdot_op = field.derivative_operator_at(t)
    loose = conv.scale * math.sqrt(opsalg.variance(hdot_op, psi))
    comm_sq = abs(opsalg.commutator_expectation(h_op, hdot_op, psi)) ** 2
    value_sq = loose**2 - (conv.scale**2 / 4.0) * comm_sq / var_h
    return math.sqrt(max(0.0, value_sq))


@dataclass(frozen=True)
class LimitSample:
    """Speed/acceleration/bound record at one time.

    Acceleration entries and the tight bound are None when the sample is
    degenerate (sigma_H <= SIGMA_FLOOR): the formulas divide by sigma_H
    there. Slacks are ``bound - |a_analytic|`` and share that fate.
    """

    t: float
    v: float
    a_analytic: Optional[float]
    a_fd: Optional[float]
    bound_loose: float
    bound_tight: Optional[float]
    slack_loose: Optional[float]
    slack_tight: Optional[float]
    degenerate: bool


def limit_sample(
    field: TimeField,
    psi: StateVector,
    t: float,
    conv: Convention,
    fd_dt: float = DEFAULT_FD_DT,
) -> LimitSample:
    """Evaluate speed, both acceleration estimates, and both bounds at t."""
    s = sigma_h(field, psi, t)
    v = conv.scale * s
    loose = bound_loose(field, psi, t, conv)
    if s <= SIGMA_FLOOR:
        return LimitSample(
            t=t, v=v, a_analytic=None, a_fd=None, bound_loose=loose,
            bound_tight=None, slack_loose=None, slack_tight=None, degenerate=True,
        )
    a_an = acceleration_from_covariance(field, psi, t, conv)
    a_fd = acceleration_fd(field, psi, t, fd_dt, conv)
    tight = bound_tight(field, psi, t, conv)
    return LimitSample(
        t=t, v=v, a_analytic=a_an, a_fd=a_fd, bound_loose=loose,
        bound_tight=tight, slack_loose=loose - abs(a_an),
        slack_tight=tight - abs(a_an), degenerate=False,
    )
