"""Dense Hermitian operator algebra and pure-state statistics.

Everything here is a pure function of immutable values: states are
normalized complex vectors, observables are dense N x N Hermitian
matrices, and the statistics are the usual pure-state moments

* ``expectation(A, psi)``      -> <psi|A|psi>
* ``variance(A, psi)``         -> <A^2> - <A>^2
* ``covariance(A, B, psi)``    -> <(AB + BA)/2> - <A><B>
* ``commutator_expectation``   -> <[A, B]>   (purely imaginary)
* ``anticommutator_expectation`` -> <{A, B}> (real)

Conventions
-----------
Hermiticity is enforced at construction: inputs within ``ENTRY_TOL`` of
their own adjoint are symmetrized to ``(M + M^dag)/2`` so downstream
identities (real expectations, imaginary commutators) hold to roundoff.
Expectation values whose imaginary (or, for commutators, real) residue
exceeds ``RESIDUE_TOL`` raise instead of being silently truncated.

Variances computed as a difference of expectations can come out a few
ulps negative; negatives are clamped to zero and the clamp is reported
through :func:`variance_info` so callers that care about the
zero-uncertainty singularity can tell "numerically zero" from "small".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AntiHermiticityError, DimensionError, HermiticityError, NormError

ENTRY_TOL = 1e-12     # absolute Hermiticity tolerance on matrix entries
RESIDUE_TOL = 1e-10   # max spurious imaginary/real part of an expectation
VARIANCE_CLAMP = 1e-12


class StateVector:
    """Normalized pure state of a finite-dimensional system.

    The constructor renormalizes, so ``sum |c_i|^2 == 1`` to roundoff for
    every instance. Dimension must be at least 2.
    """

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes) -> None:
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if vec.size < 2:
            raise DimensionError(f"state needs dimension >= 2, got {vec.size}")
        norm = np.linalg.norm(vec)
        if not np.isfinite(norm) or norm == 0.0:
            raise NormError("state vector has zero or non-finite norm")
        self.amplitudes = vec / norm
        self.amplitudes.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other>."""
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        """|<self|other>|^2, insensitive to global phase."""
        return abs(self.overlap(other)) ** 2

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim})"


class HermitianOperator:
    """Dense N x N Hermitian matrix (an observable).

    Inputs within ``ENTRY_TOL`` of Hermitian are symmetrized to
    ``(M + M^dag)/2``; anything further off raises
    :class:`~qaccel.errors.HermiticityError`.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix) -> None:
        mat = np.asarray(matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"operator must be square, got shape {mat.shape}")
        defect = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
        if not defect <= ENTRY_TOL:
            raise HermiticityError(
                f"matrix is not Hermitian: max |M - M^dag| = {defect:.3e} > {ENTRY_TOL}"
            )
        self.matrix = 0.5 * (mat + mat.conj().T)
        self.matrix.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.matrix + other.matrix)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.matrix - other.matrix)

    def __mul__(self, scalar: float) -> "HermitianOperator":
        return HermitianOperator(self.matrix * float(scalar))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim})"


def symmetrized_product(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """Hermitian part of a product: ``(AB + BA)/2``."""
    _check_dims(a, b)
    return HermitianOperator(0.5 * (a.matrix @ b.matrix + b.matrix @ a.matrix))


def _check_dims(op: HermitianOperator, other) -> None:
    dim = other.dim if hasattr(other, "dim") else len(other)
    if op.dim != dim:
        raise DimensionError(f"dimension mismatch: operator {op.dim} vs {dim}")


def expectation(op: HermitianOperator, psi: StateVector) -> float:
    """<psi|op|psi> as a real number.

    The raw inner product of a Hermitian operator is real up to roundoff;
    an imaginary residue of RESIDUE_TOL or more raises HermiticityError.
    """
    _check_dims(op, psi)
    raw = np.vdot(psi.amplitudes, op.matrix @ psi.amplitudes)
    if abs(raw.imag) >= RESIDUE_TOL:
        raise HermiticityError(
            f"expectation has imaginary residue {raw.imag:.3e} >= {RESIDUE_TOL}"
        )
    return float(raw.real)


@dataclass(frozen=True)
class VarianceResult:
    """Variance with its clamp diagnostic.

    ``raw`` is the unclamped difference of moments; ``value`` is
    ``max(raw, 0)``; ``clamped`` records that a (tiny) negative raw value
    was zeroed, i.e. the variance is numerically indistinguishable from 0.
    """

    value: float
    clamped: bool
    raw: float


def variance_info(op: HermitianOperator, psi: StateVector) -> VarianceResult:
    """Variance <op^2> - <op>^2 with clamp bookkeeping."""
    _check_dims(op, psi)
    vec = op.matrix @ psi.amplitudes
    mean_sq = np.vdot(vec, vec).real        # <psi|op^2|psi>, exactly real
    mean = np.vdot(psi.amplitudes, vec)
    if abs(mean.imag) >= RESIDUE_TOL:
        raise HermiticityError(
            f"expectation has imaginary residue {mean.imag:.3e} >= {RESIDUE_TOL}"
        )
    raw = float(mean_sq - mean.real**2)
    if raw < 0.0:
        return VarianceResult(value=0.0, clamped=True, raw=raw)
    return VarianceResult(value=raw, clamped=False, raw=raw)


def variance(op: HermitianOperator, psi: StateVector) -> float:
    """Variance <op^2> - <op>^2, clamped to be non-negative."""
    return variance_info(op, psi).value


def covariance(a: HermitianOperator, b: HermitianOperator, psi: StateVector) -> float:
    """Symmetrized covariance <(AB + BA)/2> - <A><B>.

    Symmetric in (a, b) by construction; covariance(a, a, psi) equals the
    unclamped variance.
    """
    _check_dims(a, b)
    _check_dims(a, psi)
    amps = psi.amplitudes
    fa = a.matrix @ amps
    fb = b.matrix @ amps
    sym = np.vdot(fa, fb).real              # Re<psi|A B|psi> = <(AB+BA)/2>
    mean_a = np.vdot(amps, fa)
    mean_b = np.vdot(amps, fb)
    for mean in (mean_a, mean_b):
        if abs(mean.imag) >= RESIDUE_TOL:
            raise HermiticityError(
                f"expectation has imaginary residue {mean.imag:.3e} >= {RESIDUE_TOL}"
            )
    return float(sym - mean_a.real * mean_b.real)


def commutator_expectation(
    a: HermitianOperator, b: HermitianOperator, psi: StateVector
) -> complex:
    """<[A, B]> for Hermitian A, B: a purely imaginary number.

    Evaluated directly as <psi|(AB - BA)|psi>. The commutator of two
    Hermitian operators is anti-Hermitian, so the real part is pure
    roundoff; a real residue of RESIDUE_TOL or more raises
    AntiHermiticityError, otherwise it is discarded.
    """
    _check_dims(a, b)
    _check_dims(a, psi)
    amps = psi.amplitudes
    comm = a.matrix @ b.matrix - b.matrix @ a.matrix
    raw = np.vdot(amps, comm @ amps)
    if abs(raw.real) >= RESIDUE_TOL:
        raise AntiHermiticityError(
            f"commutator expectation has real residue {raw.real:.3e} >= {RESIDUE_TOL}"
        )
    return complex(0.0, raw.imag)


def anticommutator_expectation(
    a: HermitianOperator, b: HermitianOperator, psi: StateVector
) -> float:
    """<{A, B}> = <AB + BA> for Hermitian A, B: a real number.

    Evaluated directly as <psi|(AB + BA)|psi>; an imaginary residue of
    RESIDUE_TOL or more raises HermiticityError.
    """
    _check_dims(a, b)
    _check_dims(a, psi)
    amps = psi.amplitudes
    anti = a.matrix @ b.matrix + b.matrix @ a.matrix
    raw = np.vdot(amps, anti @ amps)
    if abs(raw.imag) >= RESIDUE_TOL:
        raise HermiticityError(
            f"anticommutator expectation has imaginary residue {raw.imag:.3e} >= {RESIDUE_TOL}"
        )
    return float(raw.real)


@dataclass(frozen=True)
class ExpectationContext:
    """A fixed state to take statistics against.

    Bundles the state so call sites that evaluate several observables at
    the same instant read as ``ctx.variance(H)`` etc.
    """

    state: StateVector

    def expectation(self, op: HermitianOperator) -> float:
        return expectation(op, self.state)

    def variance(self, op: HermitianOperator) -> float:
        return variance(op, self.state)

    def variance_info(self, op: HermitianOperator) -> VarianceResult:
        return variance_info(op, self.state)

    def covariance(self, a: HermitianOperator, b: HermitianOperator) -> float:
        return covariance(a, b, self.state)

    def commutator_expectation(self, a: HermitianOperator, b: HermitianOperator) -> complex:
        return commutator_expectation(a, b, self.state)

    def anticommutator_expectation(self, a: HermitianOperator, b: HermitianOperator) -> float:
        return anticommutator_expectation(a, b, self.state)
