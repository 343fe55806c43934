"""Three reference field configurations with closed-form trajectories.

Each scenario bundles a time-dependent qubit field h(t) (with analytic
derivative), the closed-form Bloch trajectory a(t) it generates, and
closed forms for the squared acceleration, its bound, and the overall
maximum |hdot|^2. The three cover the saturation cases of the
acceleration bound:

* ``example1`` - a precessing field engineered so the state moves at
  full speed (a . h = 0) while the field keeps changing direction:
  the bound is never attained at generic times.
* ``example2`` - h(t) = gamma(t) z with gamma > 0, started from a state
  tilted away from the pole: the bound is attained at every time, but
  (a . h != 0) keeps it below the overall maximum; the ratio
  accel^2 / |hdot|^2 is exactly 3/4 for the reference initial state.
* ``example3`` - h(t) = omega0 cos(nu0 t) z acting on an equatorial
  state: the bound is attained and equals the overall maximum
  omega0^2 nu0^2 sin^2(nu0 t).

Scenario objects are immutable; sampling them from multiple threads is
fine. Scenario names and parameter keys are part of the CLI contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bloch import BlochFrame, SaturationClass
from .dynamics import DEFAULT_FD_STEP, TimeField, bloch_to_state, field_to_operator
from .errors import ConfigError
from .opsalg import StateVector

SIMPSON_PANELS_PER_UNIT = 10_000


def _grid_values(func: Callable, xs: np.ndarray) -> np.ndarray:
    """Evaluate a scalar function on a grid, vectorized when possible."""
    try:
        ys = np.asarray(func(xs), dtype=float)
        if ys.shape != xs.shape:
            raise TypeError
        return ys
    except (TypeError, ValueError):
        return np.array([float(func(float(x))) for x in xs])


def _simpson_integral(func: Callable, upper: float, panels_per_unit: int) -> float:
    """Composite Simpson integral of func over [0, upper] (upper may be < 0)."""
    if upper == 0.0:
        return 0.0
    panels = max(2, math.ceil(panels_per_unit * abs(upper)))
    panels += panels % 2
    xs = np.linspace(0.0, upper, panels + 1)
    ys = _grid_values(func, xs)
    h = upper / panels
    return float((h / 3.0) * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum()))


@dataclass(frozen=True)
class Scenario:
    """A named field configuration with its closed-form reference curves.

    ``field_at(t)`` returns ``(h0, h, hdot)``; the remaining callables
    return the closed-form Bloch vector and the squared
    acceleration/bound/maximum curves. ``expected_tag`` is the
    saturation case every non-degenerate sample must classify into.
    """

    name: str
    params: dict[str, float]
    field_at: Callable[[float], tuple[float, np.ndarray, np.ndarray]]
    bloch_at: Callable[[float], np.ndarray]
    accel_sq_at: Callable[[float], float]
    bound_sq_at: Callable[[float], float]
    amax_sq_at: Callable[[float], float]
    expected_tag: SaturationClass

    def frame_at(self, t: float) -> BlochFrame:
        """Instantaneous Bloch frame on the closed-form trajectory."""
        h0, h, hdot = self.field_at(t)
        return BlochFrame(a=self.bloch_at(t), h=h, hdot=hdot, h0=h0)

    def state_at(self, t: float) -> StateVector:
        """Closed-form state (phase convention of ``bloch_to_state``)."""
        return bloch_to_state(self.bloch_at(t))

    def time_field(self, fd_step: float = DEFAULT_FD_STEP) -> TimeField:
        """The scenario's field as a TimeField with analytic derivative."""

        def ham(t: float):
            h0, h, _ = self.field_at(t)
            return field_to_operator(h0, h)

        def deriv(t: float):
            _, _, hdot = self.field_at(t)
            return field_to_operator(0.0, hdot)

        return TimeField(hamiltonian_at=ham, derivative_at=deriv, fd_step=fd_step)

    def h_of_t(self, t: float) -> np.ndarray:
        """Just the field 3-vector (for the Bloch-equation integrator)."""
        return self.field_at(t)[1]


def _require_positive(**params: float) -> None:
    for key, value in params.items():
        if not value > 0.0:
            raise ConfigError(f"parameter {key} must be positive, got {value}")


def example1(omega0: float = 1.0, nu0: float = 2.0) -> Scenario:
    """Full-speed precession: orthogonal a and h, direction-changing field.

    a(t) = (cos(nu0 t) sin(2 omega0 t), sin(nu0 t) sin(2 omega0 t),
    cos(2 omega0 t)); the generating field keeps a . h = 0 at all times,
    so the state moves at the maximal speed |h| allows, while
    h x hdot != 0 keeps the acceleration strictly below its bound:

        accel^2 = nu0^4 sin^2(4 omega0 t)
                  / [16 + 4 (nu0/omega0)^2 sin^2(2 omega0 t)]
        bound^2 = amax^2 = |hdot|^2
                = (nu0^4/16) sin^2(4 omega0 t)
                  + 2 nu0^2 omega0^2 [1 + cos(4 omega0 t)]
    """
    _require_positive(omega0=omega0, nu0=nu0)
    w, v = float(omega0), float(nu0)

    def bloch_at(t: float) -> np.ndarray:
        s2 = math.sin(2.0 * w * t)
        return np.array(
            [math.cos(v * t) * s2, math.sin(v * t) * s2, math.cos(2.0 * w * t)]
        )

    def field_at(t: float):
        s2, c2 = math.sin(2.0 * w * t), math.cos(2.0 * w * t)
        s4, c4 = math.sin(4.0 * w * t), math.cos(4.0 * w * t)
        cv, sv = math.cos(v * t), math.sin(v * t)
        h = np.array(
            [
                -(v / 2.0) * c2 * s2 * cv - w * sv,
                -(v / 2.0) * c2 * s2 * sv + w * cv,
                (v / 2.0) * s2 * s2,
            ]
        )
        hdot = np.array(
            [
                -v * w * c4 * cv + (v * v / 4.0) * s4 * sv - w * v * cv,
                -v * w * c4 * sv - (v * v / 4.0) * s4 * cv - w * v * sv,
                v * w * s4,
            ]
        )
        return 0.0, h, hdot

    def accel_sq_at(t: float) -> float:
        s4 = math.sin(4.0 * w * t)
        s2 = math.sin(2.0 * w * t)
        return v**4 * s4 * s4 / (16.0 + 4.0 * (v / w) ** 2 * s2 * s2)

    def amax_sq_at(t: float) -> float:
        s4 = math.sin(4.0 * w * t)
        c4 = math.cos(4.0 * w * t)
        return (v**4 / 16.0) * s4 * s4 + 2.0 * v * v * w * w * (1.0 + c4)

    return Scenario(
        name="example1",
        params={"omega0": w, "nu0": v},
        field_at=field_at,
        bloch_at=bloch_at,
        accel_sq_at=accel_sq_at,
        bound_sq_at=amax_sq_at,   # a . hdot = 0 on this trajectory
        amax_sq_at=amax_sq_at,
        expected_tag=SaturationClass.NO_SATURATION_ORTH,
    )


def example2(
    gamma: Callable[[float], float],
    gamma_dot: Optional[Callable[[float], float]] = None,
    params: Optional[dict[str, float]] = None,
    panels_per_unit: int = SIMPSON_PANELS_PER_UNIT,
) -> Scenario:
    """Fixed-direction field h = gamma(t) z on a tilted state.

    The reference initial state sits at polar angle pi/3, so
    a(t) = (sqrt(3)/2 cos(2 G), sqrt(3)/2 sin(2 G), 1/2) with
    G(t) = integral of gamma from 0 to t (composite Simpson,
    ``panels_per_unit`` panels per unit time, cached per sample time).
    The bound is attained at every time (h and hdot collinear) but stays
    below the overall maximum:

        accel^2 = bound^2 = (3/4) gamma_dot^2 < amax^2 = gamma_dot^2

    ``gamma`` must be positive wherever it is sampled; ``gamma_dot``
    falls back to a central difference when not provided.
    """
    if gamma_dot is None:
        def gamma_dot(t: float) -> float:
            delta = 1e-6 * max(1.0, abs(t))
            return (gamma(t + delta) - gamma(t - delta)) / (2.0 * delta)

    integral_cache: dict[float, float] = {}

    def _checked_gamma(ts):
        vals = _grid_values(gamma, np.atleast_1d(np.asarray(ts, dtype=float)))
        if np.any(vals <= 0.0):
            raise ConfigError("gamma(t) must be positive on the sampled range")
        return vals if np.ndim(ts) else vals[0]

    def phase_integral(t: float) -> float:
        t = float(t)
        if t not in integral_cache:
            integral_cache[t] = _simpson_integral(_checked_gamma, t, panels_per_unit)
        return integral_cache[t]

    root3_half = math.sqrt(3.0) / 2.0

    def bloch_at(t: float) -> np.ndarray:
        two_g = 2.0 * phase_integral(t)
        return np.array([root3_half * math.cos(two_g), root3_half * math.sin(two_g), 0.5])

    def field_at(t: float):
        g = float(gamma(t))
        if g <= 0.0:
            raise ConfigError(f"gamma({t}) = {g} must be positive")
        return 0.0, np.array([0.0, 0.0, g]), np.array([0.0, 0.0, float(gamma_dot(t))])

    def accel_sq_at(t: float) -> float:
        return 0.75 * float(gamma_dot(t)) ** 2

    def amax_sq_at(t: float) -> float:
        return float(gamma_dot(t)) ** 2

    return Scenario(
        name="example2",
        params=dict(params or {}),
        field_at=field_at,
        bloch_at=bloch_at,
        accel_sq_at=accel_sq_at,
        bound_sq_at=accel_sq_at,  # saturated: bound coincides with accel^2
        amax_sq_at=amax_sq_at,
        expected_tag=SaturationClass.SATURATION_WITHOUT_MAX,
    )


def example2_poly(c0: float = 1.0, c1: float = 0.0, c2: float = 1.0) -> Scenario:
    """``example2`` with gamma(t) = c0 + c1 t + c2 t^2 (default 1 + t^2)."""

    def gamma(t):
        return c0 + c1 * t + c2 * t * t

    def gamma_dot(t):
        return c1 + 2.0 * c2 * t

    return example2(
        gamma, gamma_dot, params={"gamma_c0": c0, "gamma_c1": c1, "gamma_c2": c2}
    )


def example3(omega0: float = 1.0, nu0: float = 1.0) -> Scenario:
    """Oscillating fixed-direction field h = omega0 cos(nu0 t) z on an
    equatorial state.

    a(t) = (cos(2 (omega0/nu0) sin(nu0 t)), sin(...), 0) keeps a . h = 0,
    and h, hdot stay collinear, so the bound is attained AND maximal:

        accel^2 = bound^2 = amax^2 = omega0^2 nu0^2 sin^2(nu0 t)

    Where cos(nu0 t) = 0 the field (hence sigma_H) vanishes and the
    sample is degenerate: the closed forms remain finite but the
    acceleration formulas divide by zero there.
    """
    _require_positive(omega0=omega0, nu0=nu0)
    w, v = float(omega0), float(nu0)

    def bloch_at(t: float) -> np.ndarray:
        ang = 2.0 * (w / v) * math.sin(v * t)
        return np.array([math.cos(ang), math.sin(ang), 0.0])

    def field_at(t: float):
        return (
            0.0,
            np.array([0.0, 0.0, w * math.cos(v * t)]),
            np.array([0.0, 0.0, -w * v * math.sin(v * t)]),
        )

    def curve(t: float) -> float:
        s = math.sin(v * t)
        return w * w * v * v * s * s

    return Scenario(
        name="example3",
        params={"omega0": w, "nu0": v},
        field_at=field_at,
        bloch_at=bloch_at,
        accel_sq_at=curve,
        bound_sq_at=curve,
        amax_sq_at=curve,
        expected_tag=SaturationClass.SATURATION_WITH_MAX,
    )


SCENARIO_PARAM_KEYS = {
    "example1": {"omega0", "nu0"},
    "example2": {"gamma_c0", "gamma_c1", "gamma_c2"},
    "example3": {"omega0", "nu0"},
}


def build_scenario(name: str, params: Optional[dict[str, float]] = None) -> Scenario:
    """Construct a named scenario from a flat parameter mapping.

    Unknown names or parameter keys raise ConfigError so CLI typos fail
    loudly instead of silently using defaults.
    """
    params = dict(params or {})
    if name not in SCENARIO_PARAM_KEYS:
        raise ConfigError(
            f"unknown scenario {name!r}; known: {sorted(SCENARIO_PARAM_KEYS)} or 'custom'"
        )
    unknown = set(params) - SCENARIO_PARAM_KEYS[name]
    if unknown:
        raise ConfigError(f"unknown parameter(s) for {name}: {sorted(unknown)}")
    if name == "example1":
        return example1(params.get("omega0", 1.0), params.get("nu0", 2.0))
    if name == "example2":
        return example2_poly(
            params.get("gamma_c0", 1.0),
            params.get("gamma_c1", 0.0),
            params.get("gamma_c2", 1.0),
        )
    return example3(params.get("omega0", 1.0), params.get("nu0", 1.0))
