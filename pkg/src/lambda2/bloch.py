"""Atomic dynamics at one spatial cell.

Two tiers are provided:

* a linearized weak-signal model for the three coherences that matter,
  ``S1`` (optical, b-a channel), ``S2`` (optical, b-d channel) and ``S``
  (ground, b-c), valid while essentially all population sits in the ground
  level b;
* an optional full 4x4 density-matrix model over the levels (b, c, a, d)
  with radiative decay of the upper levels.

In gamma units the linear tier reads

    dS1/dtau = -S1 + (i/2)(s1 + c1*S)
    dS2/dtau = -S2 + (i/2)(s2 + c2*S)
    dS /dtau = -gamma_bc*S + (i/2)(conj(c1)*S1 + conj(c2)*S2)

These equations are pinned by two requirements: the field sources are the
optical coherences exactly as they appear in the propagation equations, and
adiabatic elimination of S1, S2 must reproduce the reduced plane-wave system
with ``eta = chi**2/4``.  Both are enforced by tests.

The full tier decays each upper-level population at rate 1 (branching 1/2
to each lower level) and additionally dephases the upper levels at rate 1,
so that every optical coherence decays at exactly rate 1 and the weak-signal
linearization of this tier coincides with the linear tier above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ControlPair,
    InvalidDensityMatrix,
    SignalPair,
    StepTooLarge,
    validate_controls,
    warn_if_unphysical_coherence,
)

__all__ = [
    "AtomicSlice",
    "bloch_rhs_linear",
    "bloch_rhs_arrays",
    "bloch_step",
    "adiabatic_polarizations",
    "B", "C", "A", "D",
    "validate_density_matrix",
    "full_lindblad_rhs",
    "lindblad_step",
    "weak_signal_rho",
    "coherences_from_rho",
]

# Level ordering of the 4x4 tier: two lower levels first.
B, C, A, D = 0, 1, 2, 3


@dataclass(frozen=True)
class AtomicSlice:
    """Coherences of one spatial cell: optical S1, S2 and ground S."""

    S1: complex = 0j
    S2: complex = 0j
    S: complex = 0j

    def __post_init__(self):
        warn_if_unphysical_coherence(self.S1, self.S2, self.S)

    def as_tuple(self):
        return (self.S1, self.S2, self.S)


def bloch_rhs_arrays(S1, S2, S, s1, s2, c1, c2, gamma_bc=0.0):
    """Linear-tier right-hand side on scalars or numpy arrays (elementwise)."""
    dS1 = -S1 + 0.5j * (s1 + c1 * S)
    dS2 = -S2 + 0.5j * (s2 + c2 * S)
    dS = -gamma_bc * S + 0.5j * (np.conj(c1) * S1 + np.conj(c2) * S2)
    return dS1, dS2, dS


def bloch_rhs_linear(a: AtomicSlice, s: SignalPair, c: ControlPair,
                     gamma_bc: float = 0.0) -> AtomicSlice:
    """Time derivative of the linearized coherences (tau units)."""
    dS1, dS2, dS = bloch_rhs_arrays(a.S1, a.S2, a.S, s.s1, s.s2,
                                    c.c1, c.c2, gamma_bc)
    return AtomicSlice(complex(dS1), complex(dS2), complex(dS))


def bloch_step(a: AtomicSlice, s: SignalPair, c: ControlPair,
               gamma_bc: float, dtau: float) -> AtomicSlice:
    """One RK4 step of the linear tier with the drives held constant.

    The step guard ``dtau <= 0.1`` and ``dtau*max(|c1|,|c2|) <= 0.2`` keeps
    the per-step control-induced rotation small enough for 4th-order
    accuracy at the tolerances used in this package.
    """
    if dtau > 0.1 or dtau * max(abs(c.c1), abs(c.c2)) > 0.2:
        raise StepTooLarge(
            f"dtau = {dtau:.4g} too large for controls "
            f"({abs(c.c1):.3g}, {abs(c.c2):.3g})"
        )
    y = np.array(a.as_tuple(), dtype=complex)

    def f(v):
        return np.array(bloch_rhs_arrays(v[0], v[1], v[2], s.s1, s.s2,
                                         c.c1, c.c2, gamma_bc))

    k1 = f(y)
    k2 = f(y + 0.5 * dtau * k1)
    k3 = f(y + 0.5 * dtau * k2)
    k4 = f(y + dtau * k3)
    y = y + (dtau / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return AtomicSlice(complex(y[0]), complex(y[1]), complex(y[2]))


def adiabatic_polarizations(s: SignalPair, c: ControlPair):
    """Steady-state coherences for fields varying slower than the decay.

    Setting the optical time derivatives to zero and requiring a stationary
    ground coherence (gamma_bc = 0) gives

        S  = -(conj(c1) s1 + conj(c2) s2) / (|c1|^2 + |c2|^2)
        S1 = (i/2)(s1 + c1 S),    S2 = (i/2)(s2 + c2 S)

    Feeding S1, S2 into the plane-wave field equation reproduces the
    reduced model with eta = chi**2/4 (tested property).
    """
    validate_controls(c)
    S = -(np.conj(c.c1) * s.s1 + np.conj(c.c2) * s.s2) / c.total
    S1 = 0.5j * (s.s1 + c.c1 * S)
    S2 = 0.5j * (s.s2 + c.c2 * S)
    return complex(S1), complex(S2), complex(S)


# ---------------------------------------------------------------------------
# Full four-level tier
# ---------------------------------------------------------------------------

def _collapse_operators():
    ops = []
    for upper in (A, D):
        for lower in (B, C):
            m = np.zeros((4, 4), dtype=complex)
            m[lower, upper] = 1.0
            ops.append((0.5, m))  # radiative rate 1 per upper level, split 1/2+1/2
        deph = np.zeros((4, 4), dtype=complex)
        deph[upper, upper] = 1.0
        ops.append((1.0, deph))  # upper-level dephasing -> optical coherences decay at 1
    return ops


_COLLAPSE = _collapse_operators()


def validate_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Check Hermiticity (1e-12), unit trace (1e-10) and positivity (-1e-9)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidDensityMatrix(f"expected shape (4, 4), got {rho.shape}")
    if not np.all(np.isfinite(rho.view(float))):
        raise InvalidDensityMatrix("density matrix contains non-finite entries")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > 1e-12:
        raise InvalidDensityMatrix(f"Hermiticity violated by {herm:.3g}")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > 1e-10:
        raise InvalidDensityMatrix(f"trace = {tr!r}, expected 1")
    lo = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if lo < -1e-9:
        raise InvalidDensityMatrix(f"negative eigenvalue {lo:.3g}")
    return rho


def _hamiltonian(s: SignalPair, c: ControlPair) -> np.ndarray:
    H = np.zeros((4, 4), dtype=complex)
    H[A, B] = -0.5 * s.s1
    H[D, B] = -0.5 * s.s2
    H[A, C] = -0.5 * c.c1
    H[D, C] = -0.5 * c.c2
    return H + H.conj().T


def full_lindblad_rhs(rho: np.ndarray, s: SignalPair, c: ControlPair,
                      validate: bool = True) -> np.ndarray:
    """d rho/dtau of the resonant four-level medium (tau units).

    ``-i[H, rho]`` with the double-lambda coupling Hamiltonian plus decay of
    the upper levels as described in the module docstring.  Trace-free and
    Hermiticity-preserving by construction.
    """
    rho = np.asarray(rho, dtype=complex)
    if validate:
        validate_density_matrix(rho)
    H = _hamiltonian(s, c)
    drho = -1j * (H @ rho - rho @ H)
    for rate, op in _COLLAPSE:
        opd = op.conj().T
        opdop = opd @ op
        drho += rate * (op @ rho @ opd - 0.5 * (opdop @ rho + rho @ opdop))
    return drho


def lindblad_step(rho: np.ndarray, s: SignalPair, c: ControlPair,
                  dtau: float) -> np.ndarray:
    """One RK4 step of the full tier (drives held constant)."""
    if dtau > 0.1 or dtau * max(abs(c.c1), abs(c.c2), abs(s.s1), abs(s.s2)) > 0.2:
        raise StepTooLarge(f"dtau = {dtau:.4g} too large for the given drives")
    k1 = full_lindblad_rhs(rho, s, c, validate=False)
    k2 = full_lindblad_rhs(rho + 0.5 * dtau * k1, s, c, validate=False)
    k3 = full_lindblad_rhs(rho + 0.5 * dtau * k2, s, c, validate=False)
    k4 = full_lindblad_rhs(rho + dtau * k3, s, c, validate=False)
    return rho + (dtau / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def weak_signal_rho(S1: complex, S2: complex, S: complex) -> np.ndarray:
    """Density matrix of the pure state ``|b> + S|c> + S1|a> + S2|d>``.

    Positive by construction; to first order in small amplitudes its
    coherences relative to b equal (S1, S2, S), which maps the linear tier
    into the full tier for comparison tests.
    """
    psi = np.zeros(4, dtype=complex)
    psi[B] = 1.0
    psi[C] = S
    psi[A] = S1
    psi[D] = S2
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def coherences_from_rho(rho: np.ndarray):
    """Extract (S1, S2, S) = (rho_ab, rho_db, rho_cb) from the full tier."""
    rho = np.asarray(rho, dtype=complex)
    return complex(rho[A, B]), complex(rho[D, B]), complex(rho[C, B])
