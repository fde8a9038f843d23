"""Piecewise-smooth time profiles of the two control envelopes.

A :class:`ControlSchedule` holds, per control beam, an ordered list of
contiguous segments covering ``[0, tau_end]``.  Segment profiles are
``constant``, ``linear`` ramps or ``cos`` (raised-cosine) ramps between a
start and an end amplitude; envelopes must be continuous across segment
boundaries.  Schedules are callables over lab time and accept numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InvalidSchedule

__all__ = ["Segment", "ControlSchedule", "staged_levels"]

_KINDS = ("constant", "linear", "cos")


@dataclass(frozen=True)
class Segment:
    """One schedule piece on ``[t0, t1]`` ramping ``a0 -> a1``."""

    t0: float
    t1: float
    kind: str
    a0: complex
    a1: complex | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidSchedule(f"unknown profile kind {self.kind!r}")
        if not self.t1 > self.t0:
            raise InvalidSchedule(f"segment needs t1 > t0, got [{self.t0}, {self.t1}]")
        if self.a1 is None:
            object.__setattr__(self, "a1", self.a0)
        if self.kind == "constant" and self.a1 != self.a0:
            raise InvalidSchedule("constant segment with differing endpoints")

    def value(self, t):
        u = (np.asarray(t, dtype=float) - self.t0) / (self.t1 - self.t0)
        u = np.clip(u, 0.0, 1.0)
        if self.kind == "constant":
            w = np.zeros_like(u)
        elif self.kind == "linear":
            w = u
        else:  # cos
            w = 0.5 * (1.0 - np.cos(np.pi * u))
        return self.a0 + (self.a1 - self.a0) * w


def _validate_beam(segments: list[Segment], tau_end: float, name: str,
                   t_start: float = 0.0):
    if not segments:
        raise InvalidSchedule(f"{name}: no segments")
    segs = sorted(segments, key=lambda s: s.t0)
    if abs(segs[0].t0 - t_start) > 1e-9:
        raise InvalidSchedule(
            f"{name}: coverage must start at {t_start}, got {segs[0].t0}"
        )
    if segs[-1].t1 < tau_end - 1e-9:
        raise InvalidSchedule(
            f"{name}: coverage ends at {segs[-1].t1}, needs {tau_end}"
        )
    scale = max(max(abs(s.a0), abs(s.a1)) for s in segs) or 1.0
    for prev, cur in zip(segs, segs[1:]):
        if abs(cur.t0 - prev.t1) > 1e-9:
            raise InvalidSchedule(
                f"{name}: gap/overlap between segments at {prev.t1} vs {cur.t0}"
            )
        if abs(cur.a0 - prev.a1) > 1e-9 * scale:
            raise InvalidSchedule(
                f"{name}: envelope discontinuous at tau = {cur.t0}: "
                f"{prev.a1} vs {cur.a0}"
            )
    return segs


class ControlSchedule:
    """Time profiles of the two control envelopes on ``[t_start, tau_end]``.

    ``t_start`` is 0 for ordinary schedules; partial schedules (e.g. the
    read stage of a storage cycle) may start later and are stitched onto
    earlier stages by :func:`lambda2.propagation.storage_cycle`.
    """

    def __init__(self, beam1: list[Segment], beam2: list[Segment],
                 tau_end: float, t_start: float = 0.0):
        self.tau_end = float(tau_end)
        self.t_start = float(t_start)
        self.beam1 = _validate_beam(beam1, self.tau_end, "beam1", self.t_start)
        self.beam2 = _validate_beam(beam2, self.tau_end, "beam2", self.t_start)
        self._edges = [
            np.array([s.t1 for s in self.beam1]),
            np.array([s.t1 for s in self.beam2]),
        ]

    @classmethod
    def constant(cls, c1: complex, c2: complex, tau_end: float):
        return cls([Segment(0.0, tau_end, "constant", c1)],
                   [Segment(0.0, tau_end, "constant", c2)], tau_end)

    def beam(self, which: int) -> list[Segment]:
        return self.beam1 if which == 1 else self.beam2

    def value(self, which: int, tau):
        """Envelope of one beam at lab time(s) ``tau`` (clamped outside)."""
        segs = self.beam(which)
        t = np.asarray(tau, dtype=float)
        idx = np.searchsorted(self._edges[which - 1], t, side="left")
        idx = np.clip(idx, 0, len(segs) - 1)
        if t.ndim == 0:
            return complex(segs[int(idx)].value(t))
        out = np.empty(t.shape, dtype=complex)
        for k in range(len(segs)):
            m = idx == k
            if np.any(m):
                out[m] = segs[k].value(t[m])
        return out

    def __call__(self, tau):
        return self.value(1, tau), self.value(2, tau)

    def max_amplitude(self) -> float:
        return max(
            max(max(abs(s.a0), abs(s.a1)) for s in self.beam1),
            max(max(abs(s.a0), abs(s.a1)) for s in self.beam2),
        )


def staged_levels(breakpoints: list[tuple[float, complex]], tau_end: float,
                  ramp: float = 10.0, shape: str = "cos") -> list[Segment]:
    """Build one beam's segments from ``(time, level)`` breakpoints.

    The envelope holds each level and crossfades to the next one over
    ``ramp`` time units starting at the breakpoint time.  The first
    breakpoint must be at tau = 0.
    """
    if not breakpoints or breakpoints[0][0] != 0.0:
        raise InvalidSchedule("breakpoints must start at tau = 0")
    segs: list[Segment] = []
    times = [bp[0] for bp in breakpoints]
    if any(t1 - t0 < ramp for t0, t1 in zip(times[1:], times[2:])):
        raise InvalidSchedule("breakpoints closer than the ramp duration")
    for k, (t_k, level) in enumerate(breakpoints):
        seg_start = t_k if k == 0 else t_k + ramp
        next_t = breakpoints[k + 1][0] if k + 1 < len(breakpoints) else tau_end
        if k + 1 < len(breakpoints):
            if seg_start < next_t:
                segs.append(Segment(seg_start, next_t, "constant", level))
            segs.append(Segment(next_t, next_t + ramp, shape, level,
                                breakpoints[k + 1][1]))
        else:
            if seg_start < tau_end:
                segs.append(Segment(seg_start, tau_end, "constant", level))
    return segs
