"""Uncertainty-relation checkers with explicit slack reporting.

Three related inequalities for a pair of Hermitian observables (A, B) and
a pure state psi, all sharing the left-hand side Var(A) * Var(B):

* Cauchy-Schwarz:         lhs >= |<f|g>|^2 with |f> = (A - <A>)|psi>,
                          |g> = (B - <B>)|psi>
* Robertson-Schrodinger:  lhs >= cov(A,B)^2 + |<[A,B]>|^2 / 4
* Robertson:              lhs >= |<[A,B]>|^2 / 4

The Cauchy-Schwarz right-hand side decomposes exactly into the
Robertson-Schrodinger one (real part of <f|g> is the covariance, the
imaginary part is half the commutator expectation), so the three
right-hand sides are ordered: schwarz == robertson_schrodinger >=
robertson. Each checker returns an :class:`InequalityReport` carrying
lhs, rhs, slack, and satisfied/saturated verdicts, which is what the
property sweeps assert on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import opsalg
from .opsalg import HermitianOperator, StateVector

SATISFIED_TOL = 1e-10          # absolute slack tolerance for "holds"
SATURATION_TOL_REL = 1e-8      # relative tolerance for "holds with equality"


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of one inequality check.

    ``slack = lhs - rhs``; ``satisfied`` means slack >= -SATISFIED_TOL,
    ``saturated`` means the inequality holds as an equality within
    SATURATION_TOL_REL relative to max(|lhs|, |rhs|, 1). Saturated
    implies satisfied.
    """

    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    saturated: bool


def _report(lhs: float, rhs: float) -> InequalityReport:
    slack = lhs - rhs
    satisfied = slack >= -SATISFIED_TOL
    saturated = satisfied and abs(slack) <= SATURATION_TOL_REL * max(abs(lhs), abs(rhs), 1.0)
    return InequalityReport(lhs=lhs, rhs=rhs, slack=slack, satisfied=satisfied, saturated=saturated)


def robertson(a: HermitianOperator, b: HermitianOperator, psi: StateVector) -> InequalityReport:
    """Robertson relation: Var(A) Var(B) >= |<[A,B]>|^2 / 4."""
    lhs = opsalg.variance(a, psi) * opsalg.variance(b, psi)
    comm = opsalg.commutator_expectation(a, b, psi)
    return _report(lhs, 0.25 * abs(comm) ** 2)


def robertson_schrodinger(
    a: HermitianOperator, b: HermitianOperator, psi: StateVector
) -> InequalityReport:
    """Robertson-Schrodinger relation:
    Var(A) Var(B) >= cov(A,B)^2 + |<[A,B]>|^2 / 4."""
    lhs = opsalg.variance(a, psi) * opsalg.variance(b, psi)
    cov = opsalg.covariance(a, b, psi)
    comm = opsalg.commutator_expectation(a, b, psi)
    return _report(lhs, cov**2 + 0.25 * abs(comm) ** 2)


def schwarz(a: HermitianOperator, b: HermitianOperator, psi: StateVector) -> InequalityReport:
    """Cauchy-Schwarz for the deviation vectors:
    Var(A) Var(B) = <f|f><g|g> >= |<f|g>|^2.

    The rhs is computed from the deviation vectors themselves, not from
    the covariance/commutator decomposition, so it serves as an
    independent route against :func:`robertson_schrodinger`.
    """
    opsalg._check_dims(a, b)
    opsalg._check_dims(a, psi)
    amps = psi.amplitudes
    f = a.matrix @ amps - opsalg.expectation(a, psi) * amps
    g = b.matrix @ amps - opsalg.expectation(b, psi) * amps
    lhs = float(np.vdot(f, f).real * np.vdot(g, g).real)
    rhs = float(abs(np.vdot(f, g)) ** 2)
    return _report(lhs, rhs)


def random_hermitian(rng: np.random.Generator, dim: int) -> HermitianOperator:
    """Random observable: i.i.d. standard complex normal entries, Hermitized."""
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator(0.5 * (m + m.conj().T))


def random_state(rng: np.random.Generator, dim: int) -> StateVector:
    """Random pure state drawn uniformly on the unit sphere."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(v)
