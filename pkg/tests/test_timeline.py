"""Tests for the recyclable-memory timeline: depth law and execution."""

import math

import numpy as np
import pytest

from paqsim import (
    ConfigError,
    GateOpMatrix,
    GatePlacementError,
    HardSphere,
    PlateOp,
    TimelineProgram,
    TimelineStep,
    apply_gate,
    hwp,
    init_basis,
    max_depth,
    qwp,
    run_timeline,
)


def idle_program(n_qms, n_steps):
    positions = tuple((float(10 * k), 0.0) for k in range(n_qms))
    steps = tuple(TimelineStep() for _ in range(n_steps))
    return TimelineProgram(n_qms, positions, steps)


# ---------------------------------------------------------------- max_depth


def test_max_depth_examples():
    assert max_depth(0.9, 0.1) == 21
    assert max_depth(0.5, 0.001) == 9
    assert max_depth(0.9, 0.1, n_qubits=2) == 10
    assert max_depth(0.5, 0.5) == 1


def test_max_depth_exact_integer_boundary():
    # log(0.25)/log(0.5) is exactly 2; float dust must not shave it to 1
    assert max_depth(0.5, 0.25) == 2
    assert max_depth(0.5, 0.125) == 3


def test_max_depth_unit_efficiency_is_unbounded():
    assert max_depth(1.0, 0.1) is None
    assert max_depth(1.0, 0.999, n_qubits=7) is None


def test_max_depth_defining_inequality():
    eta, p = 0.83, 0.07
    for n in (1, 2, 3):
        d = max_depth(eta, p, n_qubits=n)
        assert eta ** (n * d) >= p
        assert eta ** (n * (d + 1)) < p


def test_depth_tracks_loss_budget_single_qubit():
    # d * (-ln eta) lands within one step of ln(1/p)
    for p in (0.37, 0.1, 0.01):
        budget = math.log(1.0 / p)
        for k in range(50):
            eta = 0.5 + 0.01 * k
            loss = -math.log(eta)
            spent = max_depth(eta, p) * loss
            assert spent <= budget + 1e-9
            assert spent > budget - loss - 1e-9


def test_depth_tracks_loss_budget_two_qubits():
    p = 0.05
    budget = math.log(1.0 / p)
    for k in range(23):
        eta = 0.55 + 0.02 * k
        loss = -math.log(eta)
        spent = 2 * max_depth(eta, p, n_qubits=2) * loss
        assert spent <= budget + 1e-9
        assert spent > budget - 2 * loss - 1e-9


def test_max_depth_validation():
    with pytest.raises(ConfigError):
        max_depth(0.0, 0.1)
    with pytest.raises(ConfigError):
        max_depth(1.2, 0.1)
    with pytest.raises(ConfigError):
        max_depth(0.9, 0.0)
    with pytest.raises(ConfigError):
        max_depth(0.9, 1.0)
    with pytest.raises(ConfigError):
        max_depth(0.9, 0.1, n_qubits=0)


# ------------------------------------------------------------ program shape


def test_program_validation():
    with pytest.raises(ConfigError):
        TimelineProgram(0, ())
    with pytest.raises(ConfigError):
        TimelineProgram(2, ((0.0, 0.0),))
    with pytest.raises(ConfigError):
        TimelineProgram(2, ((0, 0), (1, 0)), (TimelineStep(cp_pairs=((0, 2),)),))
    with pytest.raises(ConfigError):
        TimelineProgram(2, ((0, 0), (1, 0)), (TimelineStep(cp_pairs=((1, 1),)),))
    with pytest.raises(ConfigError):
        TimelineProgram(
            3,
            ((0, 0), (1, 0), (2, 0)),
            (TimelineStep(cp_pairs=((0, 1), (1, 2))),),
        )
    with pytest.raises(ConfigError):
        TimelineProgram(
            1, ((0, 0),), (TimelineStep(pmu_ops=((3, PlateOp("hwp", 0.0)),)),)
        )


def test_plate_op_validation():
    with pytest.raises(ConfigError):
        PlateOp("polarizer", 10.0)
    assert PlateOp("qwp", 45.0).angle_deg == 45.0


def test_program_distance():
    program = TimelineProgram(2, ((0.0, 0.0), (3.0, 4.0)))
    assert program.distance(0, 1) == pytest.approx(5.0)


# --------------------------------------------------------------- execution


def test_idle_program_survival_is_eta_per_memory_per_step():
    for n_qms, n_steps, eta in ((1, 4, 0.77), (2, 5, 0.77), (3, 3, 0.51)):
        trace = run_timeline(idle_program(n_qms, n_steps), eta)
        assert trace.executed_steps == n_steps
        for s in trace.per_step_survival:
            assert s == pytest.approx(eta**n_qms, rel=1e-12)
        assert trace.cumulative_success == pytest.approx(
            eta ** (n_qms * n_steps), rel=1e-12
        )


def test_identity_program_runs_exactly_max_depth_steps():
    eta, p = 0.9, 0.1
    trace = run_timeline(idle_program(1, 30), eta, stop_threshold=p)
    assert trace.executed_steps == 21
    assert len(trace.per_step_survival) == 21
    assert trace.cumulative_success == pytest.approx(0.10941898913151243, abs=1e-15)
    assert trace.cumulative_success >= p
    # a program shorter than the depth budget just runs out of steps
    short = run_timeline(idle_program(1, 5), eta, stop_threshold=p)
    assert short.executed_steps == 5


def test_unit_efficiency_never_stops():
    trace = run_timeline(idle_program(2, 30), 1.0)
    assert trace.executed_steps == 30
    assert trace.cumulative_success == 1.0


def test_cp_applied_at_unit_efficiency_inside_step():
    # stored qubits pay eta only for the memory cycle; the gate itself
    # contributes a pure phase on |11>
    program = TimelineProgram(
        2, ((0.0, 0.0), (10.0, 0.0)), (TimelineStep(cp_pairs=((0, 1),)),)
    )
    trace = run_timeline(program, 0.9, initial=init_basis(2, "11"))
    assert trace.executed_steps == 1
    assert trace.cumulative_success == pytest.approx(0.81, rel=1e-12)
    amps = trace.final_state.amplitudes
    assert amps[3] == pytest.approx(-1.0)
    assert np.allclose(amps[:3], 0.0)


def test_plates_apply_in_listed_order():
    step = TimelineStep(
        pmu_ops=((0, PlateOp("hwp", 22.5)), (0, PlateOp("qwp", 45.0)))
    )
    program = TimelineProgram(1, ((0.0, 0.0),), (step,))
    trace = run_timeline(program, 1.0)
    expect = apply_gate(init_basis(1, "0"), hwp(22.5), (0,))
    expect = apply_gate(expect, qwp(45.0), (0,))
    assert np.allclose(trace.final_state.amplitudes, expect.amplitudes)
    swapped = apply_gate(init_basis(1, "0"), qwp(45.0), (0,))
    swapped = apply_gate(swapped, hwp(22.5), (0,))
    assert not np.allclose(trace.final_state.amplitudes, swapped.amplitudes)


def test_random_plates_preserve_norm_at_unit_efficiency():
    rng = np.random.default_rng(11)
    steps = []
    for _ in range(6):
        ops = tuple(
            (int(q), PlateOp(str(rng.choice(["qwp", "hwp"])), float(rng.uniform(0, 180))))
            for q in rng.integers(0, 3, size=4)
        )
        steps.append(TimelineStep(pmu_ops=ops))
    program = TimelineProgram(3, ((0, 0), (5, 0), (0, 5)), tuple(steps))
    trace = run_timeline(program, 1.0)
    assert trace.executed_steps == 6
    assert trace.cumulative_success == pytest.approx(1.0, abs=1e-12)
    assert trace.final_state.norm_sq == pytest.approx(1.0, abs=1e-12)


def test_gate_branch_norm_counts_toward_survival():
    def half_branch(_eta):
        return GateOpMatrix(np.diag([1, 1, 1, 0.5]).astype(complex))

    program = TimelineProgram(
        2,
        ((0.0, 0.0), (1.0, 0.0)),
        tuple(TimelineStep(cp_pairs=((0, 1),)) for _ in range(3)),
    )
    trace = run_timeline(
        program,
        0.99,
        cp_model=half_branch,
        stop_threshold=0.3,
        initial=init_basis(2, "11"),
    )
    # survival of the first step is eta^2 * 0.25, already under threshold
    assert trace.executed_steps == 1
    assert trace.per_step_survival[0] == pytest.approx(0.99**2 * 0.25, rel=1e-12)
    assert trace.cumulative_success < 0.3


def test_cp_reach_enforced():
    near = TimelineProgram(
        2, ((0.0, 0.0), (40.0, 0.0)), (TimelineStep(cp_pairs=((0, 1),)),)
    )
    run_timeline(near, 0.9)  # exactly at the default hard-sphere boundary

    far = TimelineProgram(
        2, ((0.0, 0.0), (50.0, 0.0)), (TimelineStep(cp_pairs=((0, 1),)),)
    )
    with pytest.raises(GatePlacementError, match=r"cp pair \(0, 1\) at 50 um"):
        run_timeline(far, 0.9)
    # a wider blockade sphere admits the same layout
    trace = run_timeline(far, 0.9, blockade=HardSphere(radius_um=60.0))
    assert trace.executed_steps == 1


def test_run_timeline_validation():
    program = idle_program(1, 1)
    with pytest.raises(ConfigError):
        run_timeline(program, 0.0)
    with pytest.raises(ConfigError):
        run_timeline(program, 1.1)
    with pytest.raises(ConfigError):
        run_timeline(program, 0.9, stop_threshold=0.0)
    with pytest.raises(ConfigError):
        run_timeline(program, 0.9, stop_threshold=1.0)
    with pytest.raises(ConfigError):
        run_timeline(program, 0.9, initial=init_basis(2, "00"))
