"""Geometric qubit layer: closed-form statistics on the Bloch sphere.

For a pure qubit state with Bloch vector ``a`` under the Hamiltonian
``H = h0 * 1 + h . sigma`` with field derivative ``hdot``, the operator
statistics reduce to vector algebra:

    Var(H)              = |h|^2    - (a . h)^2
    Var(dH/dt)          = |hdot|^2 - (a . hdot)^2
    |<[H, dH/dt]>|^2    = [(a x h) . hdot - (a x hdot) . h]^2
    a_H (unit convention) = [h . hdot - (a . h)(a . hdot)] / sigma_H

all independent of the trace part h0. Splitting the fields into
components parallel and perpendicular to ``a`` (h_par = (h.a) a,
h_perp = h - h_par) turns the acceleration bound into a statement about
plane geometry: the bound |a_H|^2 <= Var(dH/dt) = |hdot_perp|^2 is
saturated exactly when h_perp and hdot_perp are collinear, and the
saturated value reaches its overall maximum |hdot|^2 exactly when
a . h = 0. :func:`classify` reports which of the four cases a frame is
in, together with the raw booleans and a numerical consistency check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateSpeedError, NormError
from .limits import SIGMA_FLOOR

CLASSIFY_TOL_REL = 1e-8   # scale-relative tolerance for the geometric booleans
CLASSIFY_EPS_ABS = 1e-14  # absolute guard for zero-magnitude products


@dataclass(frozen=True)
class BlochFrame:
    """Instantaneous qubit geometry: Bloch vector, field, field derivative.

    ``a`` must be unit within 1e-9. ``h0`` is the trace part of the
    Hamiltonian; none of the frame functionals depend on it, which is
    itself a tested invariant.
    """

    a: np.ndarray
    h: np.ndarray
    hdot: np.ndarray
    h0: float = 0.0

    def __post_init__(self) -> None:
        for name in ("a", "h", "hdot"):
            vec = np.asarray(getattr(self, name), dtype=float).reshape(3)
            if not np.all(np.isfinite(vec)):
                raise ValueError(f"frame vector {name} has non-finite entries")
            vec.flags.writeable = False
            object.__setattr__(self, name, vec)
        norm = float(np.linalg.norm(self.a))
        if abs(norm - 1.0) > 1e-9:
            raise NormError(f"Bloch vector norm {norm} is not 1 within 1e-9")


def sigma_h2(frame: BlochFrame) -> float:
    """Var(H) = |h|^2 - (a . h)^2, clamped at zero."""
    h, a = frame.h, frame.a
    return max(0.0, float(h @ h - (a @ h) ** 2))


def sigma_hdot2(frame: BlochFrame) -> float:
    """Var(dH/dt) = |hdot|^2 - (a . hdot)^2, clamped at zero."""
    hd, a = frame.hdot, frame.a
    return max(0.0, float(hd @ hd - (a @ hd) ** 2))


def accel_bloch(frame: BlochFrame) -> float:
    """Signed acceleration [h . hdot - (a . h)(a . hdot)] / sigma_H.

    Equals the operator-side covariance route in the unit convention.
    Raises DegenerateSpeedError when sigma_H is numerically zero
    (a parallel to h: an eigenstate frame).
    """
    s2 = sigma_h2(frame)
    if s2 <= SIGMA_FLOOR**2:
        raise DegenerateSpeedError(
            f"sigma_H^2 = {s2:.3e} <= {SIGMA_FLOOR**2}; acceleration undefined for this frame"
        )
    a, h, hd = frame.a, frame.h, frame.hdot
    return float((h @ hd - (a @ h) * (a @ hd)) / math.sqrt(s2))


def commutator_sq(frame: BlochFrame) -> float:
    """|<[H, dH/dt]>|^2 = [(a x h) . hdot - (a x hdot) . h]^2.

    Vanishes when h and hdot are collinear (the field does not change
    direction); independent of h0 because the identity part commutes.
    """
    a, h, hd = frame.a, frame.h, frame.hdot
    val = float(np.cross(a, h) @ hd - np.cross(a, hd) @ h)
    return val * val


def decompose_field(
    frame: BlochFrame,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split h and hdot into parts parallel/perpendicular to the Bloch vector.

    Returns (h_par, h_perp, hdot_par, hdot_perp) with
    h_par = (h . a) a and h_perp = h - h_par, likewise for hdot.
    """
    a, h, hd = frame.a, frame.h, frame.hdot
    h_par = (h @ a) * a
    hd_par = (hd @ a) * a
    return h_par, h - h_par, hd_par, hd - hd_par


class SaturationClass(Enum):
    """The four saturation cases for the qubit acceleration bound.

    Ordered by the two booleans (a . h == 0?, h_perp x hdot_perp == 0?):
    collinear perpendicular components mean the bound is attained, and
    orthogonality of a and h means the attained bound is the overall
    maximum |hdot|.
    """

    NO_SATURATION_ORTH = "NoSaturation_Orth"
    SATURATION_WITH_MAX = "SaturationWithMax"
    NO_SATURATION_NONORTH = "NoSaturation_NonOrth"
    SATURATION_WITHOUT_MAX = "SaturationWithoutMax"

    @property
    def saturated(self) -> bool:
        return self in (self.SATURATION_WITH_MAX, self.SATURATION_WITHOUT_MAX)

    @property
    def max_attained(self) -> bool:
        return self is self.SATURATION_WITH_MAX


@dataclass(frozen=True)
class SaturationTag:
    """Classification of a frame, with the raw booleans it derives from.

    ``degenerate`` flags frames with sigma_H numerically zero (a parallel
    to h); the boolean table still applies (a vanishing h_perp makes the
    cross product exactly zero, hence "saturated"), but the acceleration
    itself is undefined there. ``consistent`` records that the implied
    equalities/inequalities between accel^2, Var(dH/dt) and |hdot|^2 were
    verified numerically on this frame.
    """

    cls: SaturationClass
    a_dot_h_zero: bool
    perp_cross_zero: bool
    degenerate: bool
    consistent: bool


_TABLE = {
    (True, False): SaturationClass.NO_SATURATION_ORTH,
    (True, True): SaturationClass.SATURATION_WITH_MAX,
    (False, False): SaturationClass.NO_SATURATION_NONORTH,
    (False, True): SaturationClass.SATURATION_WITHOUT_MAX,
}


def classify(frame: BlochFrame, tol_rel: float = CLASSIFY_TOL_REL) -> SaturationTag:
    """Classify a frame into one of the four saturation cases.

    The booleans are scale-relative: ``|a . h| <= tol_rel |h|`` and
    ``|h_perp x hdot_perp| <= tol_rel max(|h_perp| |hdot_perp|, eps)``.
    The tag is a pure function of those two booleans.
    """
    a, h, hd = frame.a, frame.h, frame.hdot
    orth = abs(float(a @ h)) <= tol_rel * float(np.linalg.norm(h))
    _, h_perp, _, hd_perp = decompose_field(frame)
    cross_norm = float(np.linalg.norm(np.cross(h_perp, hd_perp)))
    product = float(np.linalg.norm(h_perp) * np.linalg.norm(hd_perp))
    collinear = cross_norm <= tol_rel * max(product, CLASSIFY_EPS_ABS)
    cls = _TABLE[(orth, collinear)]
    degenerate = sigma_h2(frame) <= SIGMA_FLOOR**2

    # Numerical consistency of the verdict with the scalar functionals.
    s_hd2 = sigma_hdot2(frame)
    amax2 = float(hd @ hd)
    tol = tol_rel * max(amax2, 1.0)
    consistent = s_hd2 <= amax2 + tol
    if not degenerate:
        acc2 = accel_bloch(frame) ** 2
        consistent = consistent and acc2 <= s_hd2 + tol
        if collinear:
            consistent = consistent and abs(acc2 - s_hd2) <= tol
    if cls is SaturationClass.SATURATION_WITH_MAX:
        consistent = consistent and abs(s_hd2 - amax2) <= tol
    return SaturationTag(
        cls=cls,
        a_dot_h_zero=orth,
        perp_cross_zero=collinear,
        degenerate=degenerate,
        consistent=consistent,
    )
