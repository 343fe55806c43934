"""qaccel: speed and acceleration limits of driven quantum evolution.

Library layout:

* :mod:`qaccel.opsalg` - Hermitian operator algebra and pure-state statistics
* :mod:`qaccel.uncertainty` - Robertson / Robertson-Schrodinger / Schwarz checkers
* :mod:`qaccel.dynamics` - time-dependent fields, unitary propagation, Bloch maps
* :mod:`qaccel.limits` - speed, acceleration (analytic + finite-difference), bounds
* :mod:`qaccel.bloch` - closed-form qubit geometry and the saturation classifier
* :mod:`qaccel.scenarios` - reference field configurations with closed forms
* :mod:`qaccel.cli` - configuration-driven verification runner
"""

from .bloch import (
    BlochFrame,
    SaturationClass,
    SaturationTag,
    accel_bloch,
    classify,
    commutator_sq,
    decompose_field,
    sigma_h2,
    sigma_hdot2,
)
from .dynamics import (
    TimeField,
    bloch_propagate,
    bloch_to_state,
    field_to_operator,
    propagate,
    state_to_bloch,
)
from .errors import (
    AntiHermiticityError,
    ConfigError,
    DegenerateSpeedError,
    DimensionError,
    HermiticityError,
    NormError,
    QaccelError,
    StepError,
)
from .limits import (
    Convention,
    LimitSample,
    acceleration_fd,
    acceleration_from_covariance,
    bound_loose,
    bound_tight,
    limit_sample,
    speed,
)
from .opsalg import (
    ExpectationContext,
    HermitianOperator,
    StateVector,
    anticommutator_expectation,
    commutator_expectation,
    covariance,
    expectation,
    variance,
    variance_info,
)
from .scenarios import Scenario, build_scenario, example1, example2, example2_poly, example3
from .uncertainty import (
    InequalityReport,
    random_hermitian,
    random_state,
    robertson,
    robertson_schrodinger,
    schwarz,
)

__all__ = [
    "AntiHermiticityError",
    "BlochFrame",
    "ConfigError",
    "Convention",
    "DegenerateSpeedError",
    "DimensionError",
    "ExpectationContext",
    "HermiticityError",
    "HermitianOperator",
    "InequalityReport",
    "LimitSample",
    "NormError",
    "QaccelError",
    "SaturationClass",
    "SaturationTag",
    "Scenario",
    "StateVector",
    "StepError",
    "TimeField",
    "accel_bloch",
    "acceleration_fd",
    "acceleration_from_covariance",
    "anticommutator_expectation",
    "bloch_propagate",
    "bloch_to_state",
    "bound_loose",
    "bound_tight",
    "build_scenario",
    "classify",
    "commutator_expectation",
    "commutator_sq",
    "covariance",
    "decompose_field",
    "example1",
    "example2",
    "example2_poly",
    "example3",
    "expectation",
    "field_to_operator",
    "limit_sample",
    "propagate",
    "random_hermitian",
    "random_state",
    "robertson",
    "robertson_schrodinger",
    "schwarz",
    "sigma_h2",
    "sigma_hdot2",
    "speed",
    "state_to_bloch",
    "variance",
    "variance_info",
]

__version__ = "0.1.0"
