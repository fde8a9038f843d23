"""Builders and evaluators for the five synchronous-signal scenarios.

Each scheme assembles a ready-to-run propagation configuration from a small
parameter dataclass, runs exactly one propagation, and reduces the record to
a :class:`SchemeReport` with reproducible pass/fail verdicts.  Default
parameters are chosen so that each scheme demonstrates its headline effect
on a desk-scale grid; medium depth and pulse widths are free design choices
of this package (the underlying plane-wave theory fixes only the ratios).

Notes on the storage scheme: writing two matched pulses at equal controls
``C`` stores a spin wave of amplitude ``pulse/C``; reading it out with a
single control ``R`` emits a pulse of amplitude ``R/C`` times the input, so
the retrieved peak intensity carries the factor ``(R/C)**2`` (faster
read-out compresses the pulse in time).  The default read level is
calibrated so the simulated peak ratio, including the finite-bandwidth
losses of the default geometry, reproduces the target amplification of
about 1.45.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import MediumParams, MismatchedTrains, NegativeParameter
from .propagation import Grid, ProbeMetrics, probe_metrics, propagate, storage_cycle
from .pulses import PulseTrain, beam_inputs, gaussian, train_waveform, zero
from .schedule import ControlSchedule, Segment, staged_levels

__all__ = [
    "SchemeReport",
    "TwinParams", "scheme_twin",
    "CorrectionParams", "scheme_correction",
    "AmplifyParams", "scheme_amplify_transmission",
    "TransferParams", "scheme_transfer",
    "StorageParams", "scheme_amplify_storage",
]


@dataclass
class SchemeReport:
    """Outcome of one scheme run: metrics, ratios and named verdicts."""

    scheme: str
    metrics: dict
    verdicts: dict
    notes: list = field(default_factory=list)
    record: object = None

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def lines(self) -> list[str]:
        """Stable ``key: value`` lines for report files."""
        out = [f"scheme: {self.scheme}"]
        for k in sorted(self.metrics):
            v = self.metrics[k]
            out.append(f"{k}: {v:.9g}" if isinstance(v, float) else f"{k}: {v}")
        for k in sorted(self.verdicts):
            out.append(f"verdict.{k}: {'pass' if self.verdicts[k] else 'fail'}")
        out.append(f"verdict: {'pass' if self.passed else 'fail'}")
        for n in self.notes:
            out.append(f"note: {n}")
        return out


def _rel_l2(a: np.ndarray, b: np.ndarray) -> float:
    scale = math.sqrt(0.5 * (np.sum(np.abs(a) ** 2) + np.sum(np.abs(b) ** 2)))
    if scale == 0:
        return 0.0
    return float(np.linalg.norm(a - b) / scale)


# ---------------------------------------------------------------------------
# (i) twin generation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwinParams:
    """Single-beam input duplicated onto the empty beam.

    Defaults follow the headline configuration: coupling chi = 2 and equal
    controls at 12*chi, i.e. strong controls and a transparent medium.
    """

    chi: float = 2.0
    control: complex = 24.0 + 0j     # beam-1 control amplitude
    xi: float = 1.0                  # |c2|^2/|c1|^2
    length: float = 10.0
    cells: int = 100
    dtau: float = 1.0 / 120.0
    amplitude: complex = 1.0 + 0j    # input pulse peak (beam 2)
    width: float = 5.0
    center: float = 15.0
    tau_end: float = 40.0
    input_beam: int = 2
    shape_tol: float = 0.02
    amp_tol: float = 0.05


def scheme_twin(params: TwinParams = TwinParams()) -> SchemeReport:
    """Duplicate a single input signal onto the other beam.

    With ``xi = 1`` both outputs emerge with half the input amplitude; for
    general xi the created beam carries ``sqrt(xi)/(1+xi)`` and the seeded
    beam ``xi/(1+xi)`` of the input amplitude.  The verdict checks the two
    outputs are shape-matched (equal after removing the predicted amplitude
    factors) and that both amplitudes agree with the prediction.
    """
    if params.xi < 0:
        raise NegativeParameter("xi must be >= 0")
    medium = MediumParams(chi=params.chi, length=params.length,
                          cells=params.cells)
    grid = Grid.for_medium(medium, params.dtau, params.tau_end)
    c1 = params.control
    c2 = math.sqrt(params.xi) * params.control
    schedule = ControlSchedule.constant(c1, c2, params.tau_end + params.length)
    pulse = gaussian(params.amplitude, params.center, params.width)
    if params.input_beam == 2:
        input_fn = beam_inputs(beam2=pulse)
    else:
        input_fn = beam_inputs(beam1=pulse)
    rec = propagate(medium, grid, input_fn, schedule)
    m = probe_metrics(rec)

    xi = params.xi
    # predicted amplitude transfer coefficients (dark projection of the
    # single-beam input onto the control direction)
    if params.input_beam == 2:
        a_created = math.sqrt(xi) / (1.0 + xi)   # beam 1, created
        a_seeded = xi / (1.0 + xi)               # beam 2, seeded
    else:
        a_created = math.sqrt(xi) / (1.0 + xi)   # beam 2, created
        a_seeded = 1.0 / (1.0 + xi)              # beam 1, seeded
    in_peak = math.sqrt(max(m.peak_in[params.input_beam - 1], 0.0))

    notes = []
    if in_peak == 0.0:
        verdicts = {"shape_matched": True, "amplitudes": True}
        notes.append("degenerate zero input: outputs vanish identically")
        out_zero = float(np.max(np.abs(rec.probe_out)))
        verdicts["shape_matched"] = verdicts["amplitudes"] = out_zero < 1e-12
        metrics = {"input_peak_amplitude": 0.0, "output_max": out_zero}
        return SchemeReport("twin", metrics, verdicts, notes, rec)

    out1 = rec.probe_out[:, 0]
    out2 = rec.probe_out[:, 1]
    created, seeded = (out1, out2) if params.input_beam == 2 else (out2, out1)
    pred_created = a_created * in_peak
    pred_seeded = a_seeded * in_peak
    amp_created = math.sqrt(float(np.max(np.abs(created) ** 2)))
    amp_seeded = math.sqrt(float(np.max(np.abs(seeded) ** 2)))

    if a_created > 0 and a_seeded > 0:
        shape_diff = _rel_l2(created / a_created, seeded / a_seeded)
    else:
        shape_diff = float(np.linalg.norm(created)) if a_created == 0 else 0.0
    ok_shape = shape_diff <= params.shape_tol
    ok_amp = (
        abs(amp_created - pred_created) <= params.amp_tol * in_peak
        and abs(amp_seeded - pred_seeded) <= params.amp_tol * in_peak
    )
    metrics = {
        "input_peak_amplitude": in_peak,
        "created_amplitude": amp_created,
        "created_predicted": pred_created,
        "seeded_amplitude": amp_seeded,
        "seeded_predicted": pred_seeded,
        "shape_rel_l2": shape_diff,
        "xi": xi,
    }
    return SchemeReport("twin", metrics,
                        {"shape_matched": ok_shape, "amplitudes": ok_amp},
                        notes, rec)


# ---------------------------------------------------------------------------
# (ii) data correction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrectionParams:
    """Parallel restoration of two imperfect digital signals."""

    chi: float = 2.0
    control: complex = 6.0 + 0j      # equal controls on both beams
    length: float = 10.0
    cells: int = 100
    dtau: float = 1.0 / 30.0
    base: float = 5.0                # first slot start
    present_floor: float = 0.10      # fraction of nominal peak intensity
    absent_ceiling: float = 0.01
    tail: float = 10.0


def scheme_correction(train1: PulseTrain, train2: PulseTrain,
                      params: CorrectionParams = CorrectionParams()) -> SchemeReport:
    """Recover blank pulses by parallel comparison of two pulse trains.

    Every slot where at least one input carries a pulse must show up on both
    outputs (quarter intensity when one parent was blank); slots blank on
    both inputs stay dark and are non-recoverable.
    """
    if not train1.same_geometry(train2):
        raise MismatchedTrains("input trains differ in slot geometry")
    medium = MediumParams(chi=params.chi, length=params.length,
                          cells=params.cells)
    tau_end = (params.base + train1.slot_count * train1.slot_period
               + params.tail)
    grid = Grid.for_medium(medium, params.dtau, tau_end)
    schedule = ControlSchedule.constant(params.control, params.control,
                                        tau_end + params.length)
    input_fn = beam_inputs(train_waveform(train1, params.base),
                           train_waveform(train2, params.base))
    rec = propagate(medium, grid, input_fn, schedule)

    nominal = abs(train1.amplitude) ** 2
    union = [a or b for a, b in zip(train1.mask, train2.mask)]
    slot_peaks = {1: [], 2: []}
    for k in range(train1.slot_count):
        t0 = train1.slot_start(k, params.base)
        sel = (rec.taus >= t0) & (rec.taus <= t0 + train1.slot_period)
        for b in (1, 2):
            slot_peaks[b].append(float(rec.output_intensity(b)[sel].max()))

    ok_present, ok_absent = True, True
    recovered = []
    for k in range(train1.slot_count):
        hit = all(slot_peaks[b][k] >= params.present_floor * nominal
                  for b in (1, 2))
        dark = all(slot_peaks[b][k] <= params.absent_ceiling * nominal
                   for b in (1, 2))
        recovered.append(hit)
        if union[k]:
            ok_present &= hit
        else:
            ok_absent &= dark
    metrics = {
        "nominal_peak": nominal,
        "mask1": "".join("1" if b else "0" for b in train1.mask),
        "mask2": "".join("1" if b else "0" for b in train2.mask),
        "union": "".join("1" if b else "0" for b in union),
        "recovered": "".join("1" if b else "0" for b in recovered),
        "min_present_peak_frac": min(
            (min(slot_peaks[1][k], slot_peaks[2][k]) / nominal
             for k in range(train1.slot_count) if union[k]),
            default=0.0,
        ),
        "max_absent_peak_frac": max(
            (max(slot_peaks[1][k], slot_peaks[2][k]) / nominal
             for k in range(train1.slot_count) if not union[k]),
            default=0.0,
        ),
    }
    return SchemeReport(
        "correct", metrics,
        {"union_recovered": ok_present, "double_blank_dark": ok_absent},
        [], rec,
    )


# ---------------------------------------------------------------------------
# (iii) amplification in transmission
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AmplifyParams:
    """Two synchronized identical pulses, one beam amplified in transit."""

    chi: float = 2.0
    xi: float = 0.1716
    delta0: float = 0.0
    control: complex = 4.0 + 0j      # beam-1 control; c2 = sqrt(xi)*c1
    length: float = 10.0
    cells: int = 200
    dtau: float = 0.05
    amplitude: complex = 1.0 + 0j
    width: float = 15.0
    center: float = 40.0
    tau_end: float = 110.0
    min_ratio: float = 1.35


def scheme_amplify_transmission(params: AmplifyParams = AmplifyParams()) -> SchemeReport:
    """Amplify beam 1 by choosing the control intensity ratio.

    At ``xi = 3 - 2*sqrt(2) ~ 0.1716`` with matched inputs (mu = 1,
    delta0 = 0) beam 1 exits with a peak-intensity ratio of about 1.457.
    """
    if params.xi < 0:
        raise NegativeParameter("xi must be >= 0")
    medium = MediumParams(chi=params.chi, length=params.length,
                          cells=params.cells)
    grid = Grid.for_medium(medium, params.dtau, params.tau_end)
    c1 = params.control
    c2 = math.sqrt(params.xi) * params.control
    schedule = ControlSchedule.constant(c1, c2, params.tau_end + params.length)
    pulse = gaussian(params.amplitude, params.center, params.width)
    # delta0 enters through the relative phase of the beam-2 input
    pulse2 = gaussian(params.amplitude * np.exp(1j * params.delta0),
                      params.center, params.width)
    input_fn = beam_inputs(pulse, pulse2)
    rec = propagate(medium, grid, input_fn, schedule)
    m = probe_metrics(rec)
    ratio = m.peak_ratio[0]
    metrics = {
        "xi": params.xi,
        "delta0": params.delta0,
        "beam1_peak_ratio": ratio,
        "beam2_peak_ratio": m.peak_ratio[1],
    }
    return SchemeReport("amplify", metrics,
                        {"amplified": ratio >= params.min_ratio}, [], rec)


# ---------------------------------------------------------------------------
# (iv) transfer between beams
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransferParams:
    """Move a pulse from beam 1 to beam 2 by exchanging the control levels.

    The medium is deep (chi**2 * length ~ 1500) so the slowed pulse fits
    inside while the controls cross over; the dark state then carries the
    excitation from one channel to the other.
    """

    chi: float = 8.0
    control: complex = 5.477225575051661 + 0j   # sqrt(30): T = 30
    length: float = 23.4
    cells: int = 520
    dtau: float = 0.0225
    amplitude: complex = 1.0 + 0j
    width: float = 12.0
    center: float = 30.0
    swap_start: float = 57.0
    ramp: float = 10.0
    tau_end: float = 135.0
    swap: bool = True
    min_transfer: float = 0.80
    max_residual: float = 0.05


def scheme_transfer(params: TransferParams = TransferParams()) -> SchemeReport:
    """Transfer the beam-1 pulse onto beam 2 via a control crossfade."""
    medium = MediumParams(chi=params.chi, length=params.length,
                          cells=params.cells)
    grid = Grid.for_medium(medium, params.dtau, params.tau_end)
    span = params.tau_end + params.length
    H = params.control
    if params.swap:
        beam1 = staged_levels([(0.0, H), (params.swap_start, 0.0)], span,
                              ramp=params.ramp)
        beam2 = staged_levels([(0.0, 0.0), (params.swap_start, H)], span,
                              ramp=params.ramp)
        schedule = ControlSchedule(beam1, beam2, span)
    else:
        schedule = ControlSchedule.constant(H, 0.0, span)
    pulse = gaussian(params.amplitude, params.center, params.width)
    rec = propagate(medium, grid, input_fn=beam_inputs(beam1=pulse),
                    schedule=schedule)
    m = probe_metrics(rec)
    e_in = m.energy_in[0]
    transfer = m.energy_out[1] / e_in if e_in > 0 else 0.0
    residual = m.energy_out[0] / e_in if e_in > 0 else 0.0
    metrics = {
        "input_energy": e_in,
        "beam2_energy_fraction": transfer,
        "beam1_energy_fraction": residual,
    }
    return SchemeReport(
        "transfer", metrics,
        {"transferred": transfer >= params.min_transfer,
         "residual_small": residual <= params.max_residual},
        [], rec,
    )


# ---------------------------------------------------------------------------
# (v) amplification in storage
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StorageParams:
    """Store two matched pulses, retrieve an amplified one on beam 1.

    Three stages: equal controls until ``t_store`` (the write), both ramped
    to zero and held, then only the beam-1 control restored at the boosted
    read level ``read_boost * control``.  The retrieved peak-intensity
    gain is ``read_boost**2`` up to the finite-bandwidth losses of the
    geometry; the default boost is calibrated to land the simulated ratio
    at about 1.45.
    """

    chi: float = 8.0
    control: complex = 4.0 + 0j      # per-beam write level C (T_w = 32)
    read_boost: float = 1.225        # R = read_boost * C
    length: float = 40.0
    cells: int = 1000
    dtau: float = 0.04
    amplitude: complex = 1.0 + 0j
    width: float = 15.0
    center: float = 95.0
    t_store: float = 150.0           # equal controls until here
    ramp: float = 10.0
    t_read: float = 180.0
    tau_end: float = 320.0
    read_beam: int = 1
    symmetric_read: bool = False
    ratio_band: tuple = (1.30, 1.60)
    dark_beam_ceiling: float = 0.01


def _storage_schedules(params: StorageParams):
    C = params.control
    R = params.read_boost * abs(C)
    t1 = params.t_store + params.ramp
    t2 = params.t_read
    span = params.tau_end + params.length
    write1 = staged_levels([(0.0, C), (params.t_store, 0.0)], t1,
                           ramp=params.ramp)
    write2 = staged_levels([(0.0, C), (params.t_store, 0.0)], t1,
                           ramp=params.ramp)
    write = ControlSchedule(write1, write2, t1)
    if params.symmetric_read:
        levels = {1: R, 2: R}
    else:
        levels = {params.read_beam: R, 3 - params.read_beam: 0.0}
    read_beams = []
    for which in (1, 2):
        segs = [Segment(t2, t2 + params.ramp, "cos", 0.0, levels[which]),
                Segment(t2 + params.ramp, span, "constant", levels[which])]
        read_beams.append(segs)
    read = ControlSchedule(read_beams[0], read_beams[1], span, t_start=t2)
    return write, (t1, t2), read


def scheme_amplify_storage(params: StorageParams = StorageParams()) -> SchemeReport:
    """Write/hold/read cycle retrieving an amplified pulse on one beam."""
    medium = MediumParams(chi=params.chi, length=params.length,
                          cells=params.cells)
    grid = Grid.for_medium(medium, params.dtau, params.tau_end)
    write, hold, read = _storage_schedules(params)
    pulse = gaussian(params.amplitude, params.center, params.width)
    input_fn = beam_inputs(pulse, pulse)
    rec = storage_cycle(medium, grid, input_fn, write, hold, read)
    m = probe_metrics(rec)
    read_idx = params.read_beam - 1
    dark_idx = 1 - read_idx
    in_peak = m.peak_in[read_idx]
    # retrieved quantities are windowed to the read stage
    retrieved_peak = 0.0
    sel = rec.taus >= params.t_read
    if np.any(sel):
        retrieved_peak = float(
            rec.output_intensity(params.read_beam)[sel].max())
    ratio = retrieved_peak / in_peak if in_peak > 0 else 0.0
    dark_beam = 3 - params.read_beam
    dark_energy = rec.energy_between(dark_beam, lab=False)  # whole run
    dark_frac = (dark_energy / m.energy_in[dark_idx]
                 if m.energy_in[dark_idx] > 0 else 0.0)
    lo, hi = params.ratio_band
    metrics = {
        "retrieved_peak_ratio": ratio,
        "dark_beam_energy_fraction": dark_frac,
        "read_boost": params.read_boost,
        "stored_spin_norm": _spin_norm(rec, hold),
    }
    verdicts = {
        "amplified_in_band": lo <= ratio <= hi,
        "other_beam_dark": dark_frac < params.dark_beam_ceiling,
    }
    if params.symmetric_read:
        verdicts = {"retrieved": ratio > 0.5}
    return SchemeReport("store", metrics, verdicts, [], rec)


def _spin_norm(rec, hold) -> float:
    t_mid = 0.5 * (hold[0] + hold[1])
    snap = rec.snapshots.get(t_mid)
    if snap is None:
        return 0.0
    return float(np.trapezoid(np.abs(snap["spin"]) ** 2, rec.zs))
