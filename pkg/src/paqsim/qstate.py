"""Dense unnormalized multi-qubit state vectors and gate application.

States are stored as flat complex arrays over the computational basis
|b0 b1 ... b_{n-1}> with qubit 0 the MOST significant bit and 0=H, 1=V.
This ordering makes the 4x4 two-qubit matrices act with the first target
as the control, so printed matrices can be read off literally.

Amplitudes are generally unnormalized: a lossy gate is a single
post-selected Kraus branch, and the squared norm of the state is the
probability that no photon was lost (coincidence-detection success).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

ATOL = 1e-12
NORM_CAP = 1.0 + 1e-9  # loss never amplifies


@dataclass(frozen=True, eq=False)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1).copy()
        if self.n_qubits < 1:
            raise ConfigError(f"need at least one qubit, got {self.n_qubits}")
        if amps.size != 2**self.n_qubits:
            raise ConfigError(
                f"amplitude length {amps.size} != 2^{self.n_qubits}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True, eq=False)
class GateOpMatrix:
    """A 2x2 or 4x4 complex operator, possibly a non-unitary loss branch."""

    entries: np.ndarray
    unitary_flag: bool = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex).copy()
        if m.shape not in ((2, 2), (4, 4)):
            raise ConfigError(f"gate must be 2x2 or 4x4, got {m.shape}")
        # physical post-selected branch: largest singular value <= 1
        smax = float(np.linalg.norm(m, 2))
        if smax > NORM_CAP:
            raise ConfigError(f"largest singular value {smax:.3e} exceeds 1")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)
        dev = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
        object.__setattr__(self, "unitary_flag", bool(dev <= ATOL))

    @property
    def arity(self) -> int:
        return 1 if self.entries.shape[0] == 2 else 2


def init_basis(n_qubits: int, bits: str) -> StateVector:
    """Computational basis state |bits>, e.g. init_basis(2, "10")."""
    if len(bits) != n_qubits:
        raise ConfigError(f"bitstring {bits!r} length != {n_qubits} qubits")
    if any(b not in "01" for b in bits):
        raise ConfigError(f"bitstring {bits!r} must contain only 0/1")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[int(bits, 2)] = 1.0
    return StateVector(n_qubits, amps)


def apply_gate(state: StateVector, gate: GateOpMatrix, targets: list[int]) -> StateVector:
    """Apply `gate` to the target qubits, identity elsewhere.

    For a two-qubit gate, targets[0] is the gate's most significant
    (control) index. Non-unitary gates shrink the norm; nothing here
    renormalizes.
    """
    targets = list(targets)
    k = gate.arity
    if len(targets) != k:
        raise ConfigError(f"gate arity {k} but {len(targets)} targets given")
    if len(set(targets)) != len(targets):
        raise ConfigError(f"duplicate targets {targets}")
    for q in targets:
        if not 0 <= q < state.n_qubits:
            raise ConfigError(f"target {q} out of range for {state.n_qubits} qubits")

    psi = state.amplitudes.reshape([2] * state.n_qubits)
    g = gate.entries.reshape([2] * (2 * k))
    # contract gate input legs with the target axes; tensordot puts the
    # gate output legs first, so move them back into place
    psi = np.tensordot(g, psi, axes=(list(range(k, 2 * k)), targets))
    psi = np.moveaxis(psi, range(k), targets)
    return StateVector(state.n_qubits, psi.reshape(-1))


def success_probability(state: StateVector) -> float:
    """Squared norm: probability that no photon was lost."""
    return state.norm_sq
