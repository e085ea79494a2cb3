import math

import numpy as np
import pytest

from paqsim import (
    ConfigError,
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

SQRT2 = math.sqrt(2.0)


def test_pulse_spec_rejects_negative_area():
    with pytest.raises(ConfigError):
        PulseSpec(-0.1)


def test_resonant_pi_pulse():
    u = two_level_propagator(PulseSpec(math.pi)).entries
    np.testing.assert_allclose(u, [[0, -1j], [-1j, 0]], atol=1e-15)


def test_resonant_two_pi_pulse_is_minus_identity():
    u = two_level_propagator(PulseSpec(2 * math.pi)).entries
    np.testing.assert_allclose(u, -np.eye(2), atol=1e-15)


def test_far_detuned_two_pi_pulse_stays_home():
    u = two_level_propagator(PulseSpec(2 * math.pi, 1000.0)).entries
    assert abs(u[0, 0]) ** 2 >= 1 - 1e-6


def test_infinite_detuning_freezes():
    u = two_level_propagator(PulseSpec(3.7, math.inf)).entries
    np.testing.assert_allclose(u, np.eye(2), atol=0)


@pytest.mark.parametrize("theta", [0.0, 0.7, math.pi, 2 * math.pi, 31.4])
@pytest.mark.parametrize("det", [0.0, 0.5, -2.0, 1000.0])
@pytest.mark.parametrize("phase", [0.0, 1.1])
def test_propagator_is_unitary(theta, det, phase):
    u = two_level_propagator(PulseSpec(theta, det, phase)).entries
    assert np.abs(u.conj().T @ u - np.eye(2)).max() < 1e-12


def test_laser_phase_rotates_offdiagonal():
    phi = 0.8
    u = two_level_propagator(PulseSpec(math.pi, 0.0, phi)).entries
    assert abs(u[1, 0] - (-1j * np.exp(1j * phi))) < 1e-12
    assert abs(u[0, 1] - (-1j * np.exp(-1j * phi))) < 1e-12


def test_detuned_leakage_bound():
    # off-resonant population transfer never exceeds 1/(1+(Delta/Omega)^2)
    for det in (0.5, 2.0, 10.0, 150.0):
        worst = 0.0
        for theta in np.linspace(0.1, 4 * math.pi, 40):
            u = two_level_propagator(PulseSpec(float(theta), det)).entries
            worst = max(worst, abs(u[1, 0]) ** 2)
        assert worst <= 1.0 / (1.0 + det**2) + 1e-12


def test_blockade_models():
    assert Perfect().shift_over_rabi(1e9) == math.inf
    assert Perfect().reach_um() == math.inf

    hs = HardSphere(40.0)
    assert hs.shift_over_rabi(40.0) == math.inf  # boundary is inside
    assert hs.shift_over_rabi(40.000001) == 0.0
    assert hs.reach_um() == 40.0

    pl = PowerLaw(1e8)
    assert abs(pl.shift_over_rabi(10.0) - 1e8 / 10.0**6) < 1e-9
    assert pl.shift_over_rabi(0.0) == math.inf
    # reach: distance where the shift falls to 100x the Rabi frequency
    r = pl.reach_um()
    assert abs(pl.shift_over_rabi(r) - 100.0) < 1e-9


def test_blockade_model_validation():
    with pytest.raises(ConfigError):
        HardSphere(0.0)
    with pytest.raises(ConfigError):
        PowerLaw(-1.0)
    with pytest.raises(ConfigError):
        PowerLaw(1.0, 0.0)


def test_pair_propagator_unitary_and_blocked_limit():
    rng = np.random.default_rng(4)
    for _ in range(20):
        theta = rng.uniform(0.1, 20.0)
        shift = rng.uniform(0.0, 50.0)
        det = rng.uniform(-3.0, 3.0)
        u = pair_propagator(theta, shift, det, rng.uniform(0, 2 * math.pi))
        assert np.abs(u.conj().T @ u - np.eye(3)).max() < 1e-12
    u = pair_propagator(1.3, math.inf)
    assert abs(u[2, 2] - 1.0) < 1e-15  # rr frozen
    assert abs(u[0, 0] - math.cos(SQRT2 * 1.3 / 2)) < 1e-12


def test_pair_propagator_converges_to_sqrt2_reduction():
    # finite-blockade 3-level ladder vs the blocked 2-level limit; the
    # leading correction to the closed block shrinks like theta/B
    theta = 10 * math.pi
    u_inf = pair_propagator(theta, math.inf)[:2, :2]

    def dev(b):
        return np.abs(pair_propagator(theta, b)[:2, :2] - u_inf).max()

    d500, d1000, d4000 = dev(500.0), dev(1000.0), dev(4000.0)
    assert d4000 < d1000 < d500
    assert d1000 < theta / 1000.0
    assert d4000 < theta / 4000.0


def test_scheme1_ideal_is_cp():
    m = scheme1_cp_matrix(1.0).entries
    np.testing.assert_allclose(m, np.diag([1, -1, -1, -1]), atol=1e-12)


def test_scheme1_loss_structure():
    s = math.sqrt(0.33)
    m = scheme1_cp_matrix(0.33).entries
    np.testing.assert_allclose(
        m, np.diag([1.0, -s, -s, -0.33]), atol=1e-12
    )
    assert abs(m[1, 1] - (-0.5745)) < 1e-4


def test_scheme1_no_blockade_fails_with_plus_sign():
    m = scheme1_cp_matrix(1.0, 0.0).entries
    np.testing.assert_allclose(m, np.diag([1, -1, -1, 1]), atol=1e-12)
    m = scheme1_cp_matrix(0.33, 0.0).entries
    assert abs(m[3, 3] - 0.33) < 1e-12


def test_scheme1_failure_amplitude_decays_with_blockade():
    grid = (150.0, 200.0, 300.0, 500.0, 1000.0)
    devs = []
    for b in grid:
        entry = scheme1_cp_matrix(1.0, b).entries[3, 3]
        leak = 1.0 - abs(entry) ** 2
        assert leak <= 1.0 / (1.0 + b**2) + 1e-12
        assert leak < 1e-4
        devs.append(abs(entry + 1.0))
    assert all(a >= b - 1e-12 for a, b in zip(devs, devs[1:]))


def test_scheme1_pulse_area_errors_enter():
    m = scheme1_cp_matrix(1.0, math.inf, (1.0, 0.9, 1.0)).entries
    # imperfect 2pi on the free target lands at cos(0.9*pi), not -1
    assert abs(m[1, 1] - math.cos(0.9 * math.pi)) < 1e-12
    assert abs(m[2, 2] + 1.0) < 1e-12


def test_scheme1_validation():
    with pytest.raises(ConfigError):
        scheme1_cp_matrix(1.5)
    with pytest.raises(ConfigError):
        scheme1_cp_matrix(0.5, -1.0)


def test_scheme2_numbers_at_ten_pi():
    m = scheme2_cp_matrix(1.0).entries
    assert abs(m[1, 1] - (-1.0)) < 1e-15  # cos(5pi) exactly
    pair = m[3, 3]
    assert abs(pair - math.cos(5 * SQRT2 * math.pi)) < 1e-12
    assert abs(pair + 0.97517) < 1e-5
    leak = scheme2_leakage(10 * math.pi)
    assert abs(leak - (1 - math.cos(5 * SQRT2 * math.pi) ** 2)) < 1e-12


def test_scheme2_without_blockade_fails():
    m = scheme2_cp_matrix(1.0, 10 * math.pi, 0.0).entries
    assert abs(m[3, 3] - 1.0) < 1e-12


def test_scheme2_ideal_area_gives_exact_cp():
    # sqrt(2)*theta/2 an odd multiple of pi closes the pair loop on -1
    theta = SQRT2 * math.pi
    assert abs(scheme2_pair_return(theta) + 1.0) < 1e-12


def test_scheme2_loss_scaling():
    m = scheme2_cp_matrix(0.49).entries
    assert abs(m[1, 1] + 0.7) < 1e-12
    assert abs(m[3, 3] - 0.49 * math.cos(5 * SQRT2 * math.pi)) < 1e-12


def test_scheme2_validation():
    with pytest.raises(ConfigError):
        scheme2_cp_matrix(-0.1)
    with pytest.raises(ConfigError):
        scheme2_cp_matrix(0.5, 0.0)


def test_fitted_pair_frequency():
    assert abs(fit_pair_frequency(math.inf) - SQRT2) < 1e-9
    for b in (100.0, 300.0, 1000.0):
        assert abs(fit_pair_frequency(b) / SQRT2 - 1.0) < 0.01


def test_fit_needs_an_interior_minimum():
    with pytest.raises(ConfigError):
        fit_pair_frequency(math.inf, n_samples=2)
