"""Input waveform builders for the propagation solver.

All builders return callables ``f(tau) -> complex`` accepting Python floats
(and numpy arrays, elementwise).  Gaussian widths follow the 1/e amplitude
half-width convention: ``gaussian(p, t0, w)`` is ``p * exp(-((t-t0)/w)**2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import MismatchedTrains, NegativeParameter

__all__ = [
    "PulseTrain",
    "gaussian",
    "smooth_square",
    "cw_turn_on",
    "zero",
    "train_waveform",
    "beam_inputs",
]


def zero():
    """The identically-zero waveform."""
    return lambda tau: 0.0 * np.asarray(tau) if np.ndim(tau) else 0j


def gaussian(peak: complex, center: float, width: float):
    """Gaussian pulse with 1/e amplitude half-width ``width``."""
    if width <= 0:
        raise NegativeParameter("width must be > 0")

    def f(tau):
        return peak * np.exp(-((tau - center) / width) ** 2)

    return f


def _cos_edge(u):
    """Raised-cosine smoothstep on [0, 1]."""
    return 0.5 * (1.0 - np.cos(np.pi * np.clip(u, 0.0, 1.0)))


def smooth_square(amplitude: complex, start: float, length: float,
                  edge: float = 0.5):
    """Flat-top pulse of the given length with raised-cosine edges.

    Edges of duration ``edge`` are carved out of the pulse interior so the
    total footprint stays ``[start, start + length]``.
    """
    if length <= 0 or edge < 0 or 2 * edge > length:
        raise NegativeParameter("need 0 <= 2*edge <= length and length > 0")

    def f(tau):
        t = np.asarray(tau, dtype=float)
        rise = _cos_edge((t - start) / edge) if edge > 0 else (t >= start) * 1.0
        fall = _cos_edge((start + length - t) / edge) if edge > 0 \
            else (t <= start + length) * 1.0
        inside = (t >= start) & (t <= start + length)
        out = amplitude * rise * fall * inside
        return out if np.ndim(tau) else complex(out)

    return f


def cw_turn_on(amplitude: complex, ramp: float = 5.0, start: float = 0.0):
    """Constant wave switched on smoothly over ``[start, start + ramp]``."""

    def f(tau):
        t = np.asarray(tau, dtype=float)
        out = amplitude * _cos_edge((t - start) / ramp)
        return out if np.ndim(tau) else complex(out)

    return f


@dataclass(frozen=True)
class PulseTrain:
    """Slotted digital pulse train.

    One pulse slot per ``slot_period``; ``mask[k]`` says whether slot k
    carries a pulse.  Pulses are flat-top with raised-cosine edges and must
    not overlap neighbouring slots.
    """

    slot_count: int
    slot_period: float
    pulse_width: float
    amplitude: complex = 1.0 + 0j
    mask: tuple = field(default=())
    edge: float = 0.5

    def __post_init__(self):
        if self.slot_count < 1:
            raise NegativeParameter("slot_count must be >= 1")
        if not (0 < self.pulse_width < self.slot_period):
            raise NegativeParameter("need 0 < pulse_width < slot_period")
        mask = tuple(bool(b) for b in self.mask) or (True,) * self.slot_count
        if len(mask) != self.slot_count:
            raise MismatchedTrains(
                f"mask length {len(mask)} != slot_count {self.slot_count}"
            )
        object.__setattr__(self, "mask", mask)

    def slot_start(self, k: int, base: float = 0.0) -> float:
        return base + k * self.slot_period

    def same_geometry(self, other: "PulseTrain") -> bool:
        return (self.slot_count == other.slot_count
                and self.slot_period == other.slot_period
                and self.pulse_width == other.pulse_width)


def train_waveform(train: PulseTrain, base: float = 0.0):
    """Waveform of a pulse train starting at ``base``."""
    pulses = [
        smooth_square(train.amplitude, train.slot_start(k, base),
                      train.pulse_width, train.edge)
        for k in range(train.slot_count) if train.mask[k]
    ]

    def f(tau):
        if not pulses:
            return 0.0 * np.asarray(tau) if np.ndim(tau) else 0j
        out = pulses[0](tau)
        for p in pulses[1:]:
            out = out + p(tau)
        return out

    return f


def beam_inputs(beam1=None, beam2=None):
    """Combine per-beam waveforms into the two-component input callable."""
    f1 = beam1 if beam1 is not None else zero()
    f2 = beam2 if beam2 is not None else zero()

    def f(tau):
        return complex(f1(tau)), complex(f2(tau))

    return f
