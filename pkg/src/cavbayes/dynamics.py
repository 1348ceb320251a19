"""Reduced dynamics of a two-level system crossing a single-mode cavity.

The qubit enters excited, exchanges excitation with one field mode under the
rotating-wave dipole coupling

    H = (Delta/2) sz + g (a s+ + a† s-),

and is measured after a free flight during which spontaneous emission acts at
rate gamma.  Within the n-excitation sector the joint amplitudes evolve as

    c_e(t) = [cos(l_n t) - i Delta/(2 l_n) sin(l_n t)] a_{n-1},
    c_g(t) = -i (g sqrt(n)/l_n) sin(l_n t) a_{n-1},

with effective Rabi frequency l_n = sqrt(Delta^2/4 + g^2 n).  Tracing out the
field yields the 2x2 state at the cavity exit; the flight multiplies the
excited population by exp(-gamma tau_f) and the coherence by its square root.

A fully dissipative in-cavity variant (resonant, vacuum field, cavity damping
kappa and qubit decay gamma active during the transit) is provided through a
closed-form excited population f(t), assembled in complex arithmetic so the
oscillatory and overdamped regimes share one code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .errors import InvalidRate, TruncationTooSmall
from .qubit import Hermitian2, QubitState

__all__ = [
    "Scenario",
    "FieldState",
    "rabi_frequency",
    "reduced_state",
    "dissipative_state",
    "field_for",
    "detector_matrix_elements",
]

#: minimum photon-number mass the truncated ladder must capture
CAPTURE_THRESHOLD = 0.99
#: extra levels kept above the capture point
CUTOFF_MARGIN = 10


@dataclass(frozen=True)
class Scenario:
    """Physical knobs of one estimation run.

    All times and rates are in coupling units (g0 = 1 makes them the
    dimensionless products used throughout).  ``kappa``/``gamma_cav`` are the
    in-cavity damping and decay rates of the dissipative variant and must be
    zero on the unitary-transit path.
    """

    tau_c: float
    tau_f_gamma: float = 0.0
    delta: float = 0.0
    alpha: complex = 0j
    kappa: float = 0.0
    gamma_cav: float = 0.0
    fock_cutoff: Optional[int] = None  # None = automatic captured-mass rule

    def __post_init__(self):
        for name in ("tau_c", "tau_f_gamma", "kappa", "gamma_cav"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.fock_cutoff is not None and self.fock_cutoff < 0:
            raise ValueError("fock_cutoff must be nonnegative")

    @property
    def is_unitary_transit(self) -> bool:
        return self.kappa == 0.0 and self.gamma_cav == 0.0


def _auto_cutoff(alpha: complex) -> int:
    """Smallest N capturing >= 99% of the coherent mass, plus safety margin."""
    mean = abs(alpha) ** 2
    if mean == 0.0:
        return 0
    n = 0
    term = math.exp(-mean)
    mass = term
    while mass < CAPTURE_THRESHOLD:
        n += 1
        term *= mean / n
        mass += term
    return n + CUTOFF_MARGIN


@dataclass(frozen=True)
class FieldState:
    """Truncated photon-number expansion of the initial cavity field."""

    coefficients: tuple

    def __post_init__(self):
        mass = self.captured_mass
        if mass > 1.0 + 1e-12:
            raise ValueError(f"field norm {mass} exceeds 1")

    @property
    def captured_mass(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.coefficients))

    @property
    def cutoff(self) -> int:
        return len(self.coefficients) - 1

    @staticmethod
    def vacuum() -> "FieldState":
        return FieldState(coefficients=(1.0 + 0j,))

    @staticmethod
    def coherent(alpha: complex, cutoff: Optional[int] = None) -> "FieldState":
        """Coherent amplitudes a_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!).

        With ``cutoff=None`` the ladder is truncated at the smallest N whose
        captured mass reaches 99%, plus a safety margin; the tail is NOT
        renormalized away (coefficients are used as-is).
        """
        if abs(alpha) == 0.0:
            n_max = 0 if cutoff is None else cutoff
            coeff = np.zeros(n_max + 1, dtype=complex)
            coeff[0] = 1.0
            return FieldState(coefficients=tuple(coeff))
        n_max = _auto_cutoff(alpha) if cutoff is None else cutoff
        n = np.arange(n_max + 1)
        log_mag = -abs(alpha) ** 2 / 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
        phase = np.exp(1j * n * np.angle(alpha)) if alpha.imag or alpha.real < 0 else 1.0
        coeff = np.exp(log_mag) * phase
        return FieldState(coefficients=tuple(coeff))


def field_for(scenario: Scenario) -> FieldState:
    """Initial field implied by a scenario's coherent amplitude and cutoff."""
    return FieldState.coherent(scenario.alpha, scenario.fock_cutoff)


def rabi_frequency(n: int, g: float, delta: float) -> float:
    """Effective Rabi frequency sqrt(Delta^2/4 + g^2 n) of sector n >= 1."""
    if n < 1:
        raise ValueError("photon sector index must be >= 1")
    return math.sqrt(delta**2 / 4 + g**2 * n)


def _check_truncation(field: FieldState) -> None:
    if 1.0 - field.captured_mass > 1.0 - CAPTURE_THRESHOLD:
        raise TruncationTooSmall(
            f"field ladder captures only {field.captured_mass:.6f} of the mass"
        )


def detector_matrix_elements(
    g_values: np.ndarray,
    scenario: Scenario,
    field: FieldState,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (a_ee, a_eg) of the detector-time state over a g grid.

    Sums the photon-ladder contributions for every coupling value at once;
    used by the moment integrals and the Monte-Carlo paths.  Flight damping
    is applied as exp(-gamma tau_f) on the population and exp(-gamma tau_f/2)
    on the coherence.
    """
    if not scenario.is_unitary_transit:
        raise ValueError("unitary transit path requires kappa = gamma_cav = 0")
    _check_truncation(field)

    g_values = np.atleast_1d(np.asarray(g_values, dtype=float))
    coeff = np.asarray(field.coefficients, dtype=complex)
    n_max = len(coeff) - 1
    tc, delta = scenario.tau_c, scenario.delta

    # populations: sectors n = 1 .. n_max+1 hold amplitude a_{n-1}
    ns = np.arange(1, n_max + 2)
    lam = np.sqrt(delta**2 / 4 + np.outer(g_values**2, ns))
    lam_safe = np.maximum(lam, 1e-300)
    weight = np.abs(coeff) ** 2
    sector = np.cos(lam * tc) ** 2 + (delta**2 / 4) * (
        np.sin(lam * tc) / lam_safe
    ) ** 2
    a_ee = sector @ weight

    # coherences pair c_{e,m} (sector m+1) with c_{g,m} (sector m), m = 1..n_max
    if n_max >= 1:
        ms = np.arange(1, n_max + 1)
        lam_m = lam[:, :-1][:, ms - 1]  # l_m
        lam_m1 = lam[:, ms]  # l_{m+1}
        bracket = np.cos(lam_m1 * tc) - 1j * (delta / 2) * (
            np.sin(lam_m1 * tc) / np.maximum(lam_m1, 1e-300)
        )
        # g sqrt(m) sin(l_m t)/l_m, stable at l_m -> 0 via sinc
        swing = (
            g_values[:, None]
            * np.sqrt(ms)[None, :]
            * tc
            * np.sinc(lam_m * tc / np.pi)
        )
        pair_amp = coeff[ms] * np.conj(coeff[ms - 1])
        a_eg = (bracket * 1j * swing) @ pair_amp
    else:
        a_eg = np.zeros_like(a_ee, dtype=complex)

    damp = math.exp(-scenario.tau_f_gamma)
    return a_ee * damp, a_eg * math.sqrt(damp)


def reduced_state(g: float, scenario: Scenario, field: FieldState) -> QubitState:
    """Two-level state at the detector for coupling ``g``.

    Traces the field out of the jointly evolved state and applies the
    free-flight decay factors.  Unit trace and positivity are enforced by the
    returned :class:`QubitState`.
    """
    a_ee, a_eg = detector_matrix_elements(np.array([g]), scenario, field)
    ee = float(a_ee[0])
    return QubitState(Hermitian2(ee=ee, gg=1.0 - ee, eg=complex(a_eg[0])))


def _excited_fraction(g: float, t: float, gamma: float, kappa: float) -> float:
    """Excited-state population of the damped resonant vacuum model.

    Evaluated from

        f(t) = e^{-(gamma+kappa)t/2} [ cosh(s) + 2 g^2 t^2 C2(s)
                                       + (kappa-gamma)(t/2) S1(s) ],

    with s = Omega t / 2, Omega = sqrt((gamma-kappa)^2 - 16 g^2) taken as a
    principal-branch complex root, C2(s) = (cosh s - 1)/s^2 and
    S1(s) = sinh(s)/s.  Series expansions take over for |s| small so the
    Omega -> 0 point is regular; this grouping is an algebraically equivalent
    rearrangement of the standard damped-Rabi solution and satisfies f(0) = 1
    identically.
    """
    omega = np.sqrt(complex((gamma - kappa) ** 2 - 16.0 * g**2))
    s = omega * t / 2.0
    if abs(s) < 1e-4:
        s2 = s * s
        c2 = 0.5 + s2 / 24.0 + s2 * s2 / 720.0
        s1 = 1.0 + s2 / 6.0 + s2 * s2 / 120.0
        cosh_s = 1.0 + s2 / 2.0 + s2 * s2 / 24.0
    else:
        c2 = (np.cosh(s) - 1.0) / (s * s)
        s1 = np.sinh(s) / s
        cosh_s = np.cosh(s)
    val = np.exp(-(gamma + kappa) * t / 2.0) * (
        cosh_s + 2.0 * g**2 * t**2 * c2 + (kappa - gamma) * (t / 2.0) * s1
    )
    if abs(val.imag) >= 1e-12:
        raise ArithmeticError(f"imaginary residue {val.imag} in excited fraction")
    return float(val.real)


def dissipative_state(g: float, t: float, gamma: float, kappa: float) -> QubitState:
    """State after a transit with in-cavity decay/damping active.

    Resonant interaction, initial state |e>|0>.  ``gamma`` is the qubit decay
    rate, ``kappa`` the cavity damping rate.  Reduces to the unitary vacuum
    result cos^2(g t) when both rates vanish.
    """
    if gamma < 0 or kappa < 0:
        raise InvalidRate(f"rates must be nonnegative, got gamma={gamma} kappa={kappa}")
    if t < 0:
        raise ValueError("time must be nonnegative")
    f = _excited_fraction(g, t, gamma, kappa)
    f = min(max(f, 0.0), 1.0)
    return QubitState(Hermitian2(ee=f, gg=1.0 - f))


def dissipative_populations(
    g_values: np.ndarray, t: float, gamma: float, kappa: float
) -> np.ndarray:
    """Vectorized excited population of the dissipative variant."""
    if gamma < 0 or kappa < 0:
        raise InvalidRate(f"rates must be nonnegative, got gamma={gamma} kappa={kappa}")
    return np.array(
        [_excited_fraction(float(g), t, gamma, kappa) for g in np.atleast_1d(g_values)]
    )
