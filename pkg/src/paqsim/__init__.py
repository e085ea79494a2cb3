"""paqsim: photon-atom quantum memory gate and timeline simulator.

Simulates distributed quantum computing with polarization qubits and
lossy atomic-ensemble quantum memories: post-selected CP/CNOT gates
mediated by Rydberg blockade (two schemes, macroscopic matrices and an
atom-level microsim), GHZ generation at dense and transfer-matrix
level, fidelity/efficiency metrics, and a recyclable-memory timeline
computer. All gate branches are unnormalized amplitude maps; the
squared norm is the post-selection success probability.
"""

from .errors import (
    ConfigError,
    EmptyMemoryError,
    GatePlacementError,
    MemoryCapacityError,
    NumericError,
    PaqsimError,
    ParseError,
    PostSelectionError,
)
from .gates import (
    CNOT,
    CP,
    HADAMARD,
    PHASE,
    X90,
    CircuitIR,
    CircuitOp,
    GhzTopology,
    build_ghz_circuit,
    cnot_from_cp,
    cp_ideal_with_loss,
    cp_model_scheme1,
    cp_model_scheme2,
    ghz_dense_eval,
    ghz_state,
    ghz_transfer_eval,
    lossy_cnot,
    run_circuit,
)
from .memory import (
    CollectiveState,
    EnsembleConfig,
    apply_collective_pulse,
    gaussian_cloud,
    read_photon,
    scheme1_cp_micro,
    vacuum_state,
    write_photon,
)
from .metrics import (
    FidelityReport,
    basis_avg_gate_fidelity,
    efficiency_basis_avg,
    haar_avg_gate_fidelity,
    process_fidelity_postselected,
    state_fidelity_postselected,
)
from .optics import (
    WavePlate,
    distance_up_to_global_phase,
    hwp,
    jones_matrix,
    qwp,
)
from .pulses import (
    BlockadeModel,
    HardSphere,
    Perfect,
    PowerLaw,
    PulseSpec,
    fit_pair_frequency,
    pair_propagator,
    scheme1_cp_matrix,
    scheme2_cp_matrix,
    scheme2_leakage,
    scheme2_pair_return,
    two_level_propagator,
)
from .qcir import (
    parse_circuit,
    parse_timeline,
    serialize_circuit,
    serialize_timeline,
)
from .qstate import (
    GateOpMatrix,
    StateVector,
    apply_gate,
    init_basis,
    success_probability,
)
from .timeline import (
    PlateOp,
    TimelineProgram,
    TimelineStep,
    TimelineTrace,
    max_depth,
    run_timeline,
)

__version__ = "0.1.0"

__all__ = [
    "BlockadeModel",
    "CNOT",
    "CP",
    "CircuitIR",
    "CircuitOp",
    "CollectiveState",
    "ConfigError",
    "EmptyMemoryError",
    "EnsembleConfig",
    "FidelityReport",
    "GateOpMatrix",
    "GatePlacementError",
    "GhzTopology",
    "HADAMARD",
    "HardSphere",
    "MemoryCapacityError",
    "NumericError",
    "PHASE",
    "PaqsimError",
    "ParseError",
    "Perfect",
    "PlateOp",
    "PostSelectionError",
    "PowerLaw",
    "PulseSpec",
    "StateVector",
    "TimelineProgram",
    "TimelineStep",
    "TimelineTrace",
    "WavePlate",
    "X90",
    "apply_collective_pulse",
    "apply_gate",
    "basis_avg_gate_fidelity",
    "build_ghz_circuit",
    "cnot_from_cp",
    "cp_ideal_with_loss",
    "cp_model_scheme1",
    "cp_model_scheme2",
    "distance_up_to_global_phase",
    "efficiency_basis_avg",
    "fit_pair_frequency",
    "gaussian_cloud",
    "ghz_dense_eval",
    "ghz_state",
    "ghz_transfer_eval",
    "haar_avg_gate_fidelity",
    "hwp",
    "init_basis",
    "jones_matrix",
    "lossy_cnot",
    "max_depth",
    "pair_propagator",
    "parse_circuit",
    "parse_timeline",
    "process_fidelity_postselected",
    "qwp",
    "read_photon",
    "run_circuit",
    "run_timeline",
    "scheme1_cp_matrix",
    "scheme1_cp_micro",
    "scheme2_cp_matrix",
    "scheme2_leakage",
    "scheme2_pair_return",
    "serialize_circuit",
    "serialize_timeline",
    "state_fidelity_postselected",
    "success_probability",
    "two_level_propagator",
    "vacuum_state",
    "write_photon",
]
