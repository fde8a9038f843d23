"""Double-lambda four-level medium simulation toolkit.

A numpy/scipy library for the reduced plane-wave dynamics of two signal
beams coupled through a shared atomic dark state, plus a 1D field/atom
propagation solver and the five synchronous-signal manipulation schemes
built on it (twin generation, data correction, amplification in
transmission, beam-to-beam transfer and amplification in storage).
"""

from .core import (
    ControlPair,
    CourantViolation,
    DegenerateControls,
    DivisionByZeroControl,
    EmptyRecord,
    InvalidDensityMatrix,
    InvalidSchedule,
    Lambda2Error,
    MediumParams,
    MismatchedTrains,
    NegativeParameter,
    NonFiniteField,
    ParseError,
    PhaseParams,
    SignalPair,
    StepTooLarge,
    ValidationError,
    ZeroAmplitudePhase,
    control_ratio_xi,
    phase_params,
    validate_controls,
    wrap_phase,
    xi_or_inf,
)
from .reduced import (
    ReducedTrajectory,
    TransferResult,
    amplification_ratio,
    amplification_sweep,
    asymptotic_transfer,
    dark_projection,
    integrate_reduced,
    optimal_xi,
    phase_mismatch,
    reduced_rhs,
)
from .bloch import (
    AtomicSlice,
    adiabatic_polarizations,
    bloch_rhs_linear,
    bloch_step,
    full_lindblad_rhs,
    lindblad_step,
    validate_density_matrix,
)
from .pulses import PulseTrain, beam_inputs, cw_turn_on, gaussian, smooth_square, train_waveform
from .schedule import ControlSchedule, Segment, staged_levels
from .propagation import Grid, SpaceTimeRecord, ProbeMetrics, probe_metrics, propagate, storage_cycle
from .schemes import (
    AmplifyParams,
    CorrectionParams,
    SchemeReport,
    StorageParams,
    TransferParams,
    TwinParams,
    scheme_amplify_storage,
    scheme_amplify_transmission,
    scheme_correction,
    scheme_transfer,
    scheme_twin,
)

__version__ = "0.1.0"
