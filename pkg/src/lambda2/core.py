"""Shared domain types, dimensionless units and validation.

Everything in this package works in units of the optical-coherence decay
rate gamma:

* time is ``tau = gamma * t`` (dimensionless),
* Rabi-frequency envelopes are complex numbers in units of gamma,
* lengths are measured in units of ``c / gamma`` so the vacuum speed of
  light is 1,
* the only medium constant left is the collective coupling
  ``chi = g * sqrt(N) / gamma``, from which the absorption scale
  ``eta = chi**2 / 4`` follows.

Complex Rabi-frequency envelopes are represented by plain Python ``complex``
values (or complex numpy arrays); there is no wrapper class.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Lambda2Error",
    "DegenerateControls",
    "DivisionByZeroControl",
    "StepTooLarge",
    "NegativeParameter",
    "ZeroAmplitudePhase",
    "InvalidDensityMatrix",
    "CourantViolation",
    "NonFiniteField",
    "EmptyRecord",
    "MismatchedTrains",
    "InvalidSchedule",
    "ParseError",
    "ValidationError",
    "SignalPair",
    "ControlPair",
    "MediumParams",
    "PhaseParams",
    "validate_controls",
    "control_ratio_xi",
    "xi_or_inf",
    "wrap_phase",
    "phase_params",
]


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class Lambda2Error(Exception):
    """Base class for all toolkit errors."""


class DegenerateControls(Lambda2Error):
    """Both control amplitudes are zero; the dark direction is undefined."""


class DivisionByZeroControl(Lambda2Error):
    """The control intensity ratio is requested with ``|c1| = 0``."""


class StepTooLarge(Lambda2Error):
    """An integrator step violates its stability/accuracy guard."""


class NegativeParameter(Lambda2Error):
    """A parameter that must be non-negative (or positive) is not."""


class ZeroAmplitudePhase(Lambda2Error):
    """A phase is requested of an (exactly) zero amplitude."""


class InvalidDensityMatrix(Lambda2Error):
    """A 4x4 density matrix violates Hermiticity, trace or positivity."""


class CourantViolation(Lambda2Error):
    """A space-time grid breaks the ``dtau <= dz`` marching condition."""


class NonFiniteField(Lambda2Error):
    """A propagated field blew up or became NaN/Inf."""


class EmptyRecord(Lambda2Error):
    """Metrics were requested from a record holding no samples."""


class MismatchedTrains(Lambda2Error):
    """Two pulse trains do not share the same slot geometry."""


class InvalidSchedule(Lambda2Error):
    """A control schedule violates coverage/continuity requirements."""


class ParseError(Lambda2Error):
    """A config document could not be parsed; carries line information."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(Lambda2Error):
    """A config value is outside its allowed range; names the field."""

    def __init__(self, field_name: str, message: str):
        self.field_name = field_name
        super().__init__(f"{field_name}: {message}")


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------

def _require_finite(name: str, value: complex) -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NonFiniteField(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class SignalPair:
    """The two weak signal envelopes ``(s1, s2)``, in units of gamma.

    Immutable value type; safe to share across concurrent runs.
    """

    s1: complex
    s2: complex

    def __post_init__(self):
        object.__setattr__(self, "s1", _require_finite("s1", self.s1))
        object.__setattr__(self, "s2", _require_finite("s2", self.s2))

    @property
    def intensity(self) -> float:
        """Total intensity ``|s1|**2 + |s2|**2``."""
        return abs(self.s1) ** 2 + abs(self.s2) ** 2

    def as_array(self) -> np.ndarray:
        return np.array([self.s1, self.s2], dtype=complex)

    @classmethod
    def from_array(cls, a) -> "SignalPair":
        return cls(complex(a[0]), complex(a[1]))


@dataclass(frozen=True)
class ControlPair:
    """The two control envelopes ``(c1, c2)``, in units of gamma."""

    c1: complex
    c2: complex

    def __post_init__(self):
        object.__setattr__(self, "c1", _require_finite("c1", self.c1))
        object.__setattr__(self, "c2", _require_finite("c2", self.c2))

    @property
    def total(self) -> float:
        """Total control intensity ``|c1|**2 + |c2|**2``."""
        return abs(self.c1) ** 2 + abs(self.c2) ** 2

    @property
    def xi(self) -> float:
        """Control intensity ratio ``|c2|**2 / |c1|**2`` (inf if c1 = 0)."""
        return xi_or_inf(self)

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2], dtype=complex)


@dataclass(frozen=True)
class MediumParams:
    """Medium constants in gamma units.

    Parameters
    ----------
    chi:
        Collective coupling strength ``g*sqrt(N)/gamma``; must be positive.
    gamma_bc:
        Decay rate of the ground (b-c) coherence, default 0.  The reduced
        model's lossless dark mode requires 0; the knob exists for
        robustness studies.
    length:
        Medium length in units of ``c/gamma``.
    cells:
        Number of spatial cells used by the propagation solver.
    """

    chi: float
    gamma_bc: float = 0.0
    length: float = 10.0
    cells: int = 200

    def __post_init__(self):
        # chi = 0 is admitted for free-propagation reference runs
        if not (self.chi >= 0 and math.isfinite(self.chi)):
            raise NegativeParameter(f"chi must be >= 0, got {self.chi}")
        if self.gamma_bc < 0:
            raise NegativeParameter(f"gamma_bc must be >= 0, got {self.gamma_bc}")
        if not (self.length > 0):
            raise NegativeParameter(f"length must be > 0, got {self.length}")
        if self.cells < 1:
            raise NegativeParameter(f"cells must be >= 1, got {self.cells}")

    @property
    def eta(self) -> float:
        """Absorption scale ``chi**2 / 4`` of the reduced model."""
        return self.chi * self.chi / 4.0


@dataclass(frozen=True)
class PhaseParams:
    """Initial intensity ratio and phase-matching angles of a field set.

    ``mu`` is the initial signal intensity ratio ``|s2(0)|**2/|s1(0)|**2``,
    ``delta0`` the initial four-field phase mismatch and ``delta`` the
    instantaneous one; both angles are reported in ``(-pi, pi]``.
    """

    mu: float
    delta0: float
    delta: float = field(default=float("nan"))

    def __post_init__(self):
        if self.mu < 0:
            raise NegativeParameter(f"mu must be >= 0, got {self.mu}")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def validate_controls(c: ControlPair) -> ControlPair:
    """Return ``c`` unchanged if it defines a usable dark direction.

    Raises
    ------
    DegenerateControls
        If both control amplitudes vanish, in which case the intensity
        ratio and the dark direction are undefined.
    """
    if c.total == 0.0:
        raise DegenerateControls(
            "both control amplitudes are zero; the dark direction is undefined"
        )
    return c


def control_ratio_xi(c: ControlPair) -> float:
    """Control intensity ratio ``xi = |c2|**2 / |c1|**2``.

    Raises
    ------
    DivisionByZeroControl
        If ``|c1| = 0``.  Sweep contexts that want to include the
        single-control endpoint should use :func:`xi_or_inf` instead.
    """
    d = abs(c.c1) ** 2
    if d == 0.0:
        raise DivisionByZeroControl("xi is undefined for |c1| = 0")
    return abs(c.c2) ** 2 / d


def xi_or_inf(c: ControlPair) -> float:
    """Like :func:`control_ratio_xi` but maps the ``|c1| = 0`` endpoint to
    ``math.inf`` (the inverse ratio ``|c1|**2/|c2|**2`` is 0 there)."""
    validate_controls(c)
    d = abs(c.c1) ** 2
    if d == 0.0:
        return math.inf
    return abs(c.c2) ** 2 / d


def wrap_phase(x):
    """Wrap an angle (scalar or array) to the interval ``(-pi, pi]``."""
    r = np.mod(np.asarray(x, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    r = np.where(r == -np.pi, np.pi, r)
    if np.ndim(x) == 0:
        return float(r)
    return r


def phase_params(s0: SignalPair, c: ControlPair,
                 s_inf: SignalPair | None = None) -> PhaseParams:
    """Derive ``(mu, delta0, delta)`` from an initial field configuration.

    ``delta`` is computed from ``s_inf`` when given, otherwise from ``s0``
    (so it equals ``delta0``).  All four amplitudes entering a phase must
    be nonzero.
    """
    validate_controls(c)
    if abs(s0.s1) == 0.0:
        raise ZeroAmplitudePhase("mu and delta0 are undefined for s1(0) = 0")
    mu = abs(s0.s2) ** 2 / abs(s0.s1) ** 2
    d0 = _four_field_phase(s0, c)
    s_now = s0 if s_inf is None else s_inf
    d = _four_field_phase(s_now, c)
    return PhaseParams(mu=mu, delta0=d0, delta=d)


def _four_field_phase(s: SignalPair, c: ControlPair) -> float:
    """arg(c1) - arg(c2) + arg(s2) - arg(s1), wrapped to (-pi, pi]."""
    for name, z in (("c1", c.c1), ("c2", c.c2), ("s1", s.s1), ("s2", s.s2)):
        if z == 0:
            raise ZeroAmplitudePhase(f"phase of zero amplitude {name}")
    return wrap_phase(
        cmath.phase(c.c1) - cmath.phase(c.c2)
        + cmath.phase(s.s2) - cmath.phase(s.s1)
    )


def warn_if_unphysical_coherence(*values: complex, limit: float = 1.0 + 1e-9) -> None:
    """Emit a diagnostics warning when a coherence leaves the weak-signal
    regime (|rho| <= 1 for a normalized atom)."""
    for v in values:
        if abs(v) > limit:
            warnings.warn(
                f"coherence magnitude {abs(v):.3g} exceeds 1; "
                "weak-signal assumptions are breaking down",
                RuntimeWarning,
                stacklevel=3,
            )
            return
