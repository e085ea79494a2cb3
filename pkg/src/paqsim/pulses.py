"""Rabi pulse propagators, blockade models, and effective CP matrices.

All pulses are parameterized by area theta = Omega*t and dimensionless
detuning Delta/Omega, so Omega never appears explicitly. The two-level
Hamiltonian convention is

    H = (Omega/2) sigma_x + (Delta/2)(I - sigma_z)

on the (g2, r) pair, i.e. the ground state sits at zero energy. A
resonant pi pulse therefore maps g2 -> -i r, and two pi pulses give an
overall -1, the sign the CP protocols rely on. An infinite detuning
(perfect blockade) returns the identity: the blockaded limit.

The 4x4 CP matrices are single post-selected branches on the photonic
basis (|00>, |01>, |10>, |11>): memory loss contributes sqrt(eta) per
stored photon and Rydberg leakage is discarded into the loss budget (a
population stranded in r cannot be read out as a V photon).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .qstate import GateOpMatrix

# blockade shift treated as operative for reach purposes once B/Omega
# reaches this value (pulse leakage <= 1e-4)
REACH_SHIFT_OVER_RABI = 100.0


@dataclass(frozen=True)
class PulseSpec:
    area: float  # radians, Omega*t
    detuning_over_rabi: float = 0.0
    phase: float = 0.0  # laser phase

    def __post_init__(self):
        if self.area < 0:
            raise ConfigError(f"pulse area must be >= 0, got {self.area}")


@dataclass(frozen=True)
class Perfect:
    """Unconditional blockade: any pair of excitations is fully suppressed."""

    def shift_over_rabi(self, distance_um: float) -> float:
        return math.inf

    def reach_um(self) -> float:
        return math.inf


@dataclass(frozen=True)
class HardSphere:
    """Full blockade inside `radius_um`, none beyond (<= is inside)."""

    radius_um: float = 40.0
    reference_rabi_mhz: float = 1.0

    def __post_init__(self):
        if self.radius_um <= 0:
            raise ConfigError(f"blockade radius must be > 0, got {self.radius_um}")

    def shift_over_rabi(self, distance_um: float) -> float:
        return math.inf if distance_um <= self.radius_um else 0.0

    def reach_um(self) -> float:
        return self.radius_um


@dataclass(frozen=True)
class PowerLaw:
    """Van der Waals shift B = C6 / r^6, in units of the reference Rabi."""

    c6_mhz_um6: float
    reference_rabi_mhz: float = 1.0

    def __post_init__(self):
        if self.c6_mhz_um6 <= 0 or self.reference_rabi_mhz <= 0:
            raise ConfigError("C6 and reference Rabi must be > 0")

    def shift_over_rabi(self, distance_um: float) -> float:
        if distance_um <= 0:
            return math.inf
        return (self.c6_mhz_um6 / distance_um**6) / self.reference_rabi_mhz

    def reach_um(self) -> float:
        # distance where B/Omega falls to the operative threshold
        return (self.c6_mhz_um6 / (self.reference_rabi_mhz * REACH_SHIFT_OVER_RABI)) ** (1 / 6)


BlockadeModel = Perfect | HardSphere | PowerLaw


def two_level_propagator(pulse: PulseSpec) -> GateOpMatrix:
    """Exact propagator for one pulse on the (g2, r) two-level system."""
    theta = pulse.area
    if not math.isfinite(pulse.detuning_over_rabi * theta):
        return GateOpMatrix(np.eye(2))
    dt = pulse.detuning_over_rabi * theta  # Delta * t
    alpha = dt / 2.0
    vx = (theta / 2.0) * math.cos(pulse.phase)
    vy = (theta / 2.0) * math.sin(pulse.phase)
    vz = -dt / 2.0
    v = math.sqrt(vx * vx + vy * vy + vz * vz)
    if v == 0.0:
        return GateOpMatrix(np.eye(2))
    c, s = math.cos(v), math.sin(v)
    sv = np.array(
        [[vz, vx - 1j * vy], [vx + 1j * vy, -vz]], dtype=complex
    ) / v
    u = np.exp(-1j * alpha) * (c * np.eye(2) - 1j * s * sv)
    return GateOpMatrix(u)


def pair_propagator(
    area: float,
    pair_shift_over_rabi: float,
    detuning_over_rabi: float = 0.0,
    phase: float = 0.0,
) -> np.ndarray:
    """3x3 propagator on {g2g2, symmetric single-r, rr}.

    The symmetric ladder couples with matrix element sqrt(2)*Omega/2
    (collective enhancement); rr carries the blockade shift on top of
    twice the laser detuning. An infinite shift reduces exactly to the
    two-level {g2g2, sym} system at effective area sqrt(2)*area, with
    rr frozen.
    """
    if area < 0:
        raise ConfigError(f"pulse area must be >= 0, got {area}")
    if not math.isfinite(pair_shift_over_rabi):
        u2 = two_level_propagator(
            PulseSpec(math.sqrt(2) * area, detuning_over_rabi / math.sqrt(2), phase)
        ).entries
        out = np.eye(3, dtype=complex)
        out[:2, :2] = u2
        return out
    g = (math.sqrt(2) / 2.0) * area * np.exp(-1j * phase)
    ht = np.array(
        [
            [0.0, g, 0.0],
            [np.conj(g), detuning_over_rabi * area, g],
            [0.0, np.conj(g), (2.0 * detuning_over_rabi + pair_shift_over_rabi) * area],
        ],
        dtype=complex,
    )
    w, vecs = np.linalg.eigh(ht)
    return (vecs * np.exp(-1j * w)) @ vecs.conj().T


def scheme1_cp_matrix(
    eta: float,
    blockade_shift_over_rabi: float = math.inf,
    pulse_area_errors: tuple[float, float, float] = (1.0, 1.0, 1.0),
) -> GateOpMatrix:
    """Three-pulse CP branch: pi on control, 2pi on target, pi on control.

    The |11> entry is the product of the control two-pi-pulse factor and
    the blockaded-target 2pi factor (shift B/Omega as detuning); exact
    pulses with perfect blockade give diag(1,-1,-1,-1), and B=0 gives the
    +eta gate failure (the target 2pi completes and cancels the sign).
    """
    if not 0.0 <= eta <= 1.0:
        raise ConfigError(f"eta must be in [0,1], got {eta}")
    if blockade_shift_over_rabi < 0:
        raise ConfigError("blockade shift must be >= 0")
    e1, e2, e3 = pulse_area_errors
    s = math.sqrt(eta)
    u1 = two_level_propagator(PulseSpec(math.pi * e1)).entries
    u3 = two_level_propagator(PulseSpec(math.pi * e3)).entries
    a_ctrl = (u3 @ u1)[0, 0]
    a_free = two_level_propagator(PulseSpec(2.0 * math.pi * e2)).entries[0, 0]
    a_blocked = two_level_propagator(
        PulseSpec(2.0 * math.pi * e2, blockade_shift_over_rabi)
    ).entries[0, 0]
    return GateOpMatrix(
        np.diag([1.0, s * a_free, s * a_ctrl, eta * a_ctrl * a_blocked])
    )


def scheme2_pair_return(area: float, b_over_rabi: float = math.inf) -> complex:
    """Amplitude for a blockaded g2 pair to return after one pulse."""
    return complex(pair_propagator(area, b_over_rabi)[0, 0])


def scheme2_leakage(area: float, b_over_rabi: float = math.inf) -> float:
    """Pair population stranded in Rydberg configurations after the pulse."""
    return 1.0 - abs(scheme2_pair_return(area, b_over_rabi)) ** 2


def scheme2_cp_matrix(
    eta: float, area: float = 10.0 * math.pi, b_over_rabi: float = math.inf
) -> GateOpMatrix:
    """Single-pulse CP branch: one area-theta pulse on the shared ensemble.

    Single excitations return with cos(theta/2); the blockaded pair
    oscillates at sqrt(2)*Omega and returns with cos(sqrt(2)*theta/2)
    under perfect blockade, -0.97517 at the default theta = 10*pi.
    """
    if not 0.0 <= eta <= 1.0:
        raise ConfigError(f"eta must be in [0,1], got {eta}")
    if area <= 0:
        raise ConfigError(f"pulse area must be > 0, got {area}")
    s = math.sqrt(eta)
    single = two_level_propagator(PulseSpec(area)).entries[0, 0]
    pair = scheme2_pair_return(area, b_over_rabi)
    return GateOpMatrix(np.diag([1.0, s * single, s * single, eta * pair]))


def fit_pair_frequency(b_over_rabi: float, n_samples: int = 3001) -> float:
    """Fit the pair oscillation frequency in units of Omega.

    Locates the first minimum of the pair ground population over a
    window slightly longer than half a sqrt(2)-enhanced cycle and
    refines it parabolically; a perfectly blockaded pair fits sqrt(2).
    """
    x_max = 1.5 * math.pi / math.sqrt(2)
    xs = np.linspace(0.0, x_max, n_samples)
    pop = np.array(
        [abs(pair_propagator(x, b_over_rabi)[0, 0]) ** 2 for x in xs]
    )
    i = int(np.argmin(pop))
    if i == 0 or i == n_samples - 1:
        raise ConfigError("no interior population minimum in the fit window")
    # parabola through the three points around the sampled minimum
    y0, y1, y2 = pop[i - 1], pop[i], pop[i + 1]
    denom = y0 - 2.0 * y1 + y2
    shift = 0.0 if denom == 0 else 0.5 * (y0 - y2) / denom
    x_min = xs[i] + shift * (xs[1] - xs[0])
    return math.pi / x_min
