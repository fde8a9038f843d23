"""Plane-wave reduced dynamics of the two signal envelopes.

With both controls on and the atomic response adiabatically eliminated,
the two plane-wave signal envelopes obey a linear 2x2 system

    d s1/dtau = -eta * (|c2|^2 s1 - c1 conj(c2) s2) / T
    d s2/dtau = -eta * (|c1|^2 s2 - conj(c1) c2 s1) / T,   T = |c1|^2+|c2|^2

whose null direction is ``(c1, c2)`` (the dark mode) and whose orthogonal
bright mode ``(conj(c2), -conj(c1))`` decays at rate ``eta``.  The infinite
time limit is therefore the orthogonal projection of the input onto the
dark direction, which in terms of the intensity ratio ``xi``, the input
ratio ``mu`` and the four-field phase ``delta0`` reads

    s1(inf)/s1(0) = (1 + sqrt(xi*mu) e^{+i delta0}) / (1 + xi)
    s2(inf)/s2(0) = (xi + sqrt(xi/mu) e^{-i delta0}) / (1 + xi)

This module implements the right-hand side, a fixed-step RK4 integrator,
the closed-form asymptotics, the dark projection, the four-field phase
mismatch, the intensity amplification ratios and the optimum-ratio finder.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .core import (
    ControlPair,
    NegativeParameter,
    SignalPair,
    StepTooLarge,
    ZeroAmplitudePhase,
    validate_controls,
    wrap_phase,
)

__all__ = [
    "ReducedTrajectory",
    "TransferResult",
    "reduced_rhs",
    "integrate_reduced",
    "asymptotic_transfer",
    "dark_projection",
    "phase_mismatch",
    "amplification_ratio",
    "optimal_xi",
    "amplification_sweep",
]

# Step guard: the bright mode decays at rate eta, so dt*eta bounds the
# per-step phase/decay advance.
MAX_DT_ETA = 0.1


@dataclass(frozen=True)
class ReducedTrajectory:
    """Sampled solution of the reduced system.

    ``taus`` starts at 0 and is strictly increasing; ``states`` holds one
    :class:`SignalPair` per sample.  Total intensity never increases along
    a trajectory (the system is passive); the constructor rejects gross
    violations as an integrator self-check.
    """

    taus: np.ndarray
    states: list[SignalPair]

    def __post_init__(self):
        taus = np.asarray(self.taus, dtype=float)
        object.__setattr__(self, "taus", taus)
        if len(taus) != len(self.states):
            raise ValueError("taus and states must have equal length")
        if len(taus) == 0 or taus[0] != 0.0 or np.any(np.diff(taus) <= 0):
            raise ValueError("taus must start at 0 and increase strictly")
        intensities = np.array([s.intensity for s in self.states])
        if np.any(np.diff(intensities) > 1e-9):
            raise ValueError("total intensity increased beyond tolerance")

    @property
    def final(self) -> SignalPair:
        return self.states[-1]


@dataclass(frozen=True)
class TransferResult:
    """Asymptotic output of the reduced system.

    ``r1``/``r2`` are the per-beam intensity amplification ratios
    ``|s_i(inf)|^2 / |s_i(0)|^2``.  When an input beam is exactly zero the
    ratio is reported as 0.0 by convention and the created beam is read off
    ``out`` as an absolute intensity.
    """

    out: SignalPair
    r1: float
    r2: float


def _rhs_arrays(s, c, eta):
    """Vectorized core of :func:`reduced_rhs`.

    ``s`` and ``c`` are complex arrays with a trailing axis of length 2;
    broadcasting over leading axes is supported.
    """
    c1, c2 = c[..., 0], c[..., 1]
    s1, s2 = s[..., 0], s[..., 1]
    T = np.abs(c1) ** 2 + np.abs(c2) ** 2
    d1 = -eta * (np.abs(c2) ** 2 * s1 - c1 * np.conj(c2) * s2) / T
    d2 = -eta * (np.abs(c1) ** 2 * s2 - np.conj(c1) * c2 * s1) / T
    return np.stack([d1, d2], axis=-1)


def reduced_rhs(s: SignalPair, c: ControlPair, eta: float) -> SignalPair:
    """Time derivative ``d(s1, s2)/dtau`` of the reduced system."""
    validate_controls(c)
    d = _rhs_arrays(s.as_array(), c.as_array(), eta)
    return SignalPair.from_array(d)


def _integrate_batch(s0, c, eta: float, tau_end: float, dt: float,
                     record_every: int = 0):
    """Fixed-step RK4 over the reduced system, vectorized over a batch.

    Returns ``(taus, history)`` when ``record_every > 0`` (history indexed
    ``[sample, ..., component]``), else ``(tau_end, final_state)``.
    """
    if tau_end <= 0 or dt <= 0:
        raise StepTooLarge("tau_end and dt must be positive")
    if dt * eta > MAX_DT_ETA:
        raise StepTooLarge(
            f"dt*eta = {dt * eta:.3g} exceeds {MAX_DT_ETA}; reduce the step"
        )
    s = np.array(s0, dtype=complex)
    c = np.asarray(c, dtype=complex)
    n_steps = int(math.ceil(tau_end / dt - 1e-12))
    taus = [0.0]
    history = [s.copy()] if record_every else None
    tau = 0.0
    for k in range(n_steps):
        h = min(dt, tau_end - tau)
        k1 = _rhs_arrays(s, c, eta)
        k2 = _rhs_arrays(s + 0.5 * h * k1, c, eta)
        k3 = _rhs_arrays(s + 0.5 * h * k2, c, eta)
        k4 = _rhs_arrays(s + h * k3, c, eta)
        s = s + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        tau += h
        if record_every and ((k + 1) % record_every == 0 or k == n_steps - 1):
            taus.append(tau)
            history.append(s.copy())
    if record_every:
        return np.array(taus), np.array(history)
    return tau, s


def integrate_reduced(s0: SignalPair, c: ControlPair, eta: float,
                      tau_end: float, dt: float,
                      record_every: int = 1) -> ReducedTrajectory:
    """Integrate the reduced system from ``s0`` to ``tau_end``.

    Classic fixed-step 4th-order Runge-Kutta; requires ``dt*eta <= 0.1``.
    The final state converges to :func:`asymptotic_transfer` as
    ``tau_end -> inf`` (the bright component decays like ``exp(-eta*tau)``).

    ``record_every`` controls trajectory decimation (every step by default).
    """
    validate_controls(c)
    taus, history = _integrate_batch(
        s0.as_array(), c.as_array(), eta, tau_end, dt,
        record_every=max(1, record_every),
    )
    states = [SignalPair.from_array(h) for h in history]
    return ReducedTrajectory(taus=taus, states=states)


def dark_projection(s: SignalPair, c: ControlPair) -> SignalPair:
    """Project ``s`` onto the dark direction ``(c1, c2)/sqrt(T)``.

    Algebraically identical to the closed-form asymptotic transfer; this is
    the numerically safe form (no division by an input amplitude).
    """
    validate_controls(c)
    cv = c.as_array()
    sv = s.as_array()
    T = c.total
    amp = (np.conj(cv) @ sv) / T
    return SignalPair.from_array(cv * amp)


def asymptotic_transfer(s0: SignalPair, c: ControlPair) -> TransferResult:
    """Infinite-time output of the reduced system and per-beam ratios.

    Realizes the closed-form coefficients through the equivalent dark
    projection, so zero input amplitudes need no special casing; for a
    zero input beam the corresponding ratio is reported as 0.0 and the
    output carries the created beam's absolute amplitude.
    """
    out = dark_projection(s0, c)
    i1, i2 = abs(s0.s1) ** 2, abs(s0.s2) ** 2
    r1 = abs(out.s1) ** 2 / i1 if i1 > 0 else 0.0
    r2 = abs(out.s2) ** 2 / i2 if i2 > 0 else 0.0
    return TransferResult(out=out, r1=r1, r2=r2)


def phase_mismatch(s: SignalPair, c: ControlPair) -> float:
    """Four-field phase ``arg c1 - arg c2 + arg s2 - arg s1`` in (-pi, pi].

    All four amplitudes must be nonzero; vanishing amplitudes raise
    :class:`ZeroAmplitudePhase`.
    """
    for name, z in (("c1", c.c1), ("c2", c.c2), ("s1", s.s1), ("s2", s.s2)):
        if z == 0:
            raise ZeroAmplitudePhase(f"phase of zero amplitude {name}")
    return wrap_phase(
        cmath.phase(c.c1) - cmath.phase(c.c2)
        + cmath.phase(s.s2) - cmath.phase(s.s1)
    )


def amplification_ratio(xi, mu, delta0):
    """Per-beam intensity amplification ratios ``(r1, r2)``.

    Moduli squared of the closed-form transfer coefficients:

        r1 = (1 + xi*mu + 2 sqrt(xi*mu) cos(delta0)) / (1 + xi)^2
        r2 = (xi^2 + xi/mu + 2 xi sqrt(xi/mu) cos(delta0)) / (1 + xi)^2

    Accepts scalars or numpy arrays in ``xi``/``delta0`` (broadcast).  The
    single-control endpoint ``xi = inf`` maps to the limits ``(0, 1)``.
    """
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr < 0):
        raise NegativeParameter("xi must be >= 0")
    if not np.all(np.asarray(mu, dtype=float) > 0):
        raise NegativeParameter("mu must be > 0")
    cos_d = np.cos(delta0)
    with np.errstate(invalid="ignore"):
        denom = (1.0 + xi_arr) ** 2
        r1 = (1.0 + xi_arr * mu + 2.0 * np.sqrt(xi_arr * mu) * cos_d) / denom
        r2 = (xi_arr ** 2 + xi_arr / mu
              + 2.0 * xi_arr * np.sqrt(xi_arr / mu) * cos_d) / denom
    inf_mask = np.isinf(xi_arr)
    if np.any(inf_mask):
        r1 = np.where(inf_mask, 0.0, r1)
        r2 = np.where(inf_mask, 1.0, r2)
    if np.ndim(xi) == 0 and np.ndim(delta0) == 0:
        return float(r1), float(r2)
    return r1, r2


def optimal_xi(mu: float, delta0: float, which_beam: int = 1,
               xi_max: float = 50.0) -> tuple[float, float]:
    """Locate the control ratio maximizing one beam's amplification.

    Bounded scalar minimization of ``-r_beam`` on ``[0, xi_max]`` refined to
    ``|dxi| < 1e-8``, compared against both interval endpoints.  Interior
    optima are checked for stationarity (|dr/dxi| small) as a self-test of
    the closed form; boundary optima (e.g. delta0 = pi) skip that check.
    """
    if mu <= 0:
        raise NegativeParameter("mu must be > 0")
    if xi_max <= 0:
        raise NegativeParameter("xi_max must be > 0")
    idx = {1: 0, 2: 1}[which_beam]

    def r_of(x: float) -> float:
        return amplification_ratio(x, mu, delta0)[idx]

    res = minimize_scalar(lambda x: -r_of(x), bounds=(0.0, xi_max),
                          method="bounded", options={"xatol": 1e-9})
    candidates = [(0.0, r_of(0.0)), (xi_max, r_of(xi_max))]
    if res.success:
        candidates.append((float(res.x), r_of(float(res.x))))
    xi_star, r_max = max(candidates, key=lambda p: p[1])

    interior = 1e-6 < xi_star < xi_max - 1e-6
    if interior:
        h = 1e-6 * max(xi_star, 1.0)
        slope = (r_of(xi_star + h) - r_of(xi_star - h)) / (2 * h)
        if abs(slope) > 1e-4:
            raise RuntimeError(
                f"optimum at xi={xi_star:.8g} is not stationary "
                f"(dr/dxi = {slope:.3g})"
            )
    return xi_star, r_max


def amplification_sweep(xi_values, delta0_values, mu: float = 1.0):
    """Tabulate ``(xi, delta0, r1, r2)`` rows sorted by (delta0, xi).

    Returns a list of 4-tuples suitable for CSV emission.
    """
    rows = []
    for d0 in sorted(float(d) for d in delta0_values):
        xs = np.sort(np.asarray(xi_values, dtype=float))
        r1, r2 = amplification_ratio(xs, mu, d0)
        r1 = np.atleast_1d(r1)
        r2 = np.atleast_1d(r2)
        rows.extend(
            (float(x), d0, float(a), float(b)) for x, a, b in zip(xs, r1, r2)
        )
    return rows
