"""Lossy two-qubit gates, circuit IR, dense executor, and GHZ evaluators.

The CP gate acts only on the V-polarized components, which are the only
ones stored in a memory, so its post-selected branch carries the loss
structure diag(1, sqrt(eta), sqrt(eta), eta). A CNOT is that CP
sandwiched between wave-plate operations on the target. With s=sqrt(eta)
the CNOT branch is block-diagonal in the control bit:

    M0 = 1/2 [[1+s, s-1], [s-1, 1+s]]     control 0
    M1 = s/2 [[s-1, 1+s], [1+s, s-1]]     control 1

Because the control bit never flips, an N-qubit GHz cascade factors into
per-edge 2x2 branch transfers, which is what ghz_transfer_eval exploits
to reach N ~ 10^2 and beyond at O(N) cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import ConfigError
from .optics import hwp, qwp
from .pulses import scheme1_cp_matrix, scheme2_cp_matrix
from .qstate import GateOpMatrix, StateVector, apply_gate, init_basis

HADAMARD = GateOpMatrix(np.array([[1, 1], [1, -1]]) / math.sqrt(2))
PHASE = GateOpMatrix(np.diag([1.0, -1.0j]))
X90 = GateOpMatrix(np.array([[1, -1j], [-1j, 1]]) / math.sqrt(2))
CP = GateOpMatrix(np.diag([1.0, -1.0, -1.0, -1.0]))
CNOT = GateOpMatrix(
    np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=float
    )
)

CpModel = Callable[[float], GateOpMatrix]

DENSE_QUBIT_CAP = 22

_ONE_QUBIT_KINDS = ("h", "p", "x90", "qwp", "hwp")
_TWO_QUBIT_KINDS = ("cp", "cnot")


@dataclass(frozen=True)
class CircuitOp:
    kind: str
    targets: tuple[int, ...]
    angle_deg: float | None = None
    matrix: GateOpMatrix | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        k = self.kind
        if k in _ONE_QUBIT_KINDS:
            if len(self.targets) != 1:
                raise ConfigError(f"{k} takes one target, got {self.targets}")
            needs_angle = k in ("qwp", "hwp")
            if needs_angle != (self.angle_deg is not None):
                raise ConfigError(f"angle mismatch for {k}")
        elif k in _TWO_QUBIT_KINDS:
            if len(self.targets) != 2 or self.targets[0] == self.targets[1]:
                raise ConfigError(f"{k} takes two distinct targets, got {self.targets}")
        elif k == "custom":
            if self.matrix is None or self.matrix.arity != len(self.targets):
                raise ConfigError("custom op needs a matrix matching its target count")
        else:
            raise ConfigError(f"unknown op kind {k!r}")


@dataclass(frozen=True)
class CircuitIR:
    n_qubits: int
    ops: tuple[CircuitOp, ...]

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ConfigError(f"need at least one qubit, got {self.n_qubits}")
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            for t in op.targets:
                if not 0 <= t < self.n_qubits:
                    raise ConfigError(
                        f"target {t} out of range for {self.n_qubits} qubits"
                    )


class GhzTopology(Enum):
    STAR = "star"
    CHAIN = "chain"

    @classmethod
    def from_name(cls, name: str) -> "GhzTopology":
        try:
            return cls(name.lower())
        except ValueError:
            raise ConfigError(f"unknown topology {name!r}; use star or chain") from None


def cp_ideal_with_loss(eta: float) -> GateOpMatrix:
    """diag(1,sqrt(eta),sqrt(eta),eta) applied to the ideal CP."""
    if not 0.0 <= eta <= 1.0:
        raise ConfigError(f"eta must be in [0,1], got {eta}")
    s = math.sqrt(eta)
    return GateOpMatrix(np.diag([1.0, -s, -s, -eta]))


def cp_model_scheme1(
    blockade_shift_over_rabi: float = math.inf,
    pulse_area_errors: tuple[float, float, float] = (1.0, 1.0, 1.0),
) -> CpModel:
    def model(eta: float) -> GateOpMatrix:
        return scheme1_cp_matrix(eta, blockade_shift_over_rabi, pulse_area_errors)

    return model


def cp_model_scheme2(
    area: float = 10.0 * math.pi, b_over_rabi: float = math.inf
) -> CpModel:
    def model(eta: float) -> GateOpMatrix:
        return scheme2_cp_matrix(eta, area, b_over_rabi)

    return model


def cnot_from_cp(cp_gate: GateOpMatrix) -> GateOpMatrix:
    """Sandwich a CP branch in the target-side wave-plate sequence."""
    if cp_gate.arity != 2:
        raise ConfigError("cnot sandwich needs a two-qubit CP matrix")
    eye = np.eye(2)
    before = np.kron(eye, X90.entries @ PHASE.entries)
    after = np.kron(eye, PHASE.entries @ X90.entries)
    return GateOpMatrix(after @ cp_gate.entries @ before)


def lossy_cnot(eta: float) -> GateOpMatrix:
    """Post-selected CNOT branch with memory efficiency eta inside the CP."""
    return cnot_from_cp(cp_ideal_with_loss(eta))


def _op_gate(op: CircuitOp, eta: float, cp_model: CpModel) -> GateOpMatrix:
    if op.kind == "h":
        return HADAMARD
    if op.kind == "p":
        return PHASE
    if op.kind == "x90":
        return X90
    if op.kind == "qwp":
        return qwp(op.angle_deg)
    if op.kind == "hwp":
        return hwp(op.angle_deg)
    if op.kind == "cp":
        return cp_model(eta)
    if op.kind == "cnot":
        return cnot_from_cp(cp_model(eta))
    return op.matrix


def run_circuit(
    circuit: CircuitIR,
    eta: float = 1.0,
    cp_model: CpModel = cp_ideal_with_loss,
    initial: StateVector | None = None,
) -> StateVector:
    """Apply every op in order; the result is an unnormalized branch."""
    if initial is None:
        state = init_basis(circuit.n_qubits, "0" * circuit.n_qubits)
    else:
        if initial.n_qubits != circuit.n_qubits:
            raise ConfigError("initial state size does not match circuit")
        state = initial
    for op in circuit.ops:
        state = apply_gate(state, _op_gate(op, eta, cp_model), op.targets)
    return state


def build_ghz_circuit(n: int, topology: GhzTopology = GhzTopology.STAR) -> CircuitIR:
    """H on qubit 0 followed by N-1 CNOTs, fanned out or chained."""
    if n < 2:
        raise ConfigError(f"GHZ needs at least 2 qubits, got {n}")
    ops = [CircuitOp("h", (0,))]
    for i in range(1, n):
        ctrl = 0 if topology is GhzTopology.STAR else i - 1
        ops.append(CircuitOp("cnot", (ctrl, i)))
    return CircuitIR(n, tuple(ops))


def ghz_state(n: int) -> StateVector:
    if n < 2:
        raise ConfigError(f"GHZ needs at least 2 qubits, got {n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1.0 / math.sqrt(2.0)
    return StateVector(n, amps)


def _branch_transfers(eta: float) -> tuple[float, float, float, float]:
    s = math.sqrt(eta)
    return (1 + s) / 2, (s - 1) / 2, s * (s - 1) / 2, s * (1 + s) / 2


def ghz_transfer_eval(
    n: int, eta: float, topology: GhzTopology = GhzTopology.STAR
) -> tuple[float, float]:
    """O(N) GHZ fidelity and efficiency from per-edge branch transfers.

    T[c,t] is the amplitude for a CNOT to leave its fresh |0> target in
    state t given control branch c. The GHZ overlap needs only the
    all-0 and all-1 paths; the success probability sums |amp|^2 over
    every leaf, which is a product structure for Star and a 2x2 matrix
    power for Chain.
    """
    if n < 2:
        raise ConfigError(f"GHZ needs at least 2 qubits, got {n}")
    if not 0.0 <= eta <= 1.0:
        raise ConfigError(f"eta must be in [0,1], got {eta}")
    t00, t01, t10, t11 = _branch_transfers(eta)
    overlap = 0.5 * (t00 ** (n - 1) + t11 ** (n - 1))
    if topology is GhzTopology.STAR:
        prob = 0.5 * ((t00**2 + t01**2) ** (n - 1) + (t10**2 + t11**2) ** (n - 1))
    else:
        e = np.array([[t00**2, t01**2], [t10**2, t11**2]])
        prob = 0.5 * float(np.sum(np.linalg.matrix_power(e, n - 1)))
    return overlap**2 / prob, prob


def ghz_dense_eval(
    n: int,
    eta: float,
    topology: GhzTopology = GhzTopology.STAR,
    cp_model: CpModel = cp_ideal_with_loss,
) -> tuple[float, float]:
    """Full state-vector GHZ run; the transfer evaluator's oracle."""
    if n > DENSE_QUBIT_CAP:
        raise ConfigError(
            f"dense GHZ capped at {DENSE_QUBIT_CAP} qubits, got {n}"
        )
    out = run_circuit(build_ghz_circuit(n, topology), eta, cp_model)
    prob = out.norm_sq
    if prob <= 0.0:
        raise ConfigError("GHZ branch has zero success probability")
    ideal = ghz_state(n)
    overlap = np.vdot(ideal.amplitudes, out.amplitudes)
    return float(abs(overlap) ** 2 / prob), float(prob)
