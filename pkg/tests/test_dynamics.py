import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clockmag import dc, diabatic, hyperfine
from clockmag.dynamics import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    HamiltonianSchedule,
    IntegratorConfig,
    StateVector,
    dyson_first_order,
    evolve,
    propagator,
    unitary_of_step,
)
from clockmag.errors import ContractError, ConvergenceError

finite = st.floats(-5, 5, allow_nan=False)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


def test_zero_generator_is_identity():
    assert np.allclose(unitary_of_step(np.zeros((2, 2)), 1.0), np.eye(2), atol=1e-15)


def test_pi_pulse_swaps_populations():
    w = 1.7
    U = unitary_of_step(0.5 * w * SIGMA_X, np.pi / w)
    assert np.allclose(U, -1j * SIGMA_X, atol=1e-14)


def test_diagonal_generator():
    w, t = 0.8, 2.3
    U = unitary_of_step(0.5 * w * SIGMA_Z, t)
    assert np.allclose(U, np.diag([np.exp(-0.5j * w * t), np.exp(0.5j * w * t)]), atol=1e-14)


def test_non_hermitian_rejected():
    with pytest.raises(ContractError):
        unitary_of_step(np.array([[0, 1], [0, 0]], dtype=complex), 0.1)


@given(st.integers(2, 6), st.integers(0, 2**31), st.floats(-3, 3, allow_nan=False))
def test_step_is_unitary(n, seed, dt):
    U = unitary_of_step(random_hermitian(np.random.default_rng(seed), n), dt)
    assert np.max(np.abs(U.conj().T @ U - np.eye(n))) < 1e-9


@given(finite, finite, finite, finite, st.floats(-2, 2, allow_nan=False))
def test_two_by_two_matches_eigendecomposition(h0, hx, hy, hz, dt):
    H = h0 * np.eye(2) + hx * SIGMA_X + hy * SIGMA_Y + hz * SIGMA_Z
    w, V = np.linalg.eigh(H)
    ref = (V * np.exp(-1j * w * dt)) @ V.conj().T
    assert np.allclose(unitary_of_step(H, dt), ref, atol=1e-11)


def test_pi_half_pulse_evolution():
    w = 2.0
    sched = HamiltonianSchedule.constant(0.5 * w * SIGMA_X, np.pi / (2 * w))
    out = evolve(StateVector.basis(0, 2), sched, IntegratorConfig(10))
    assert np.allclose(out.populations, [0.5, 0.5], atol=1e-14)


def test_zero_schedule_leaves_state():
    psi = StateVector.normalized([1.0, 1j, 0.5])
    out = evolve(psi, HamiltonianSchedule.constant(np.zeros((3, 3)), 4.0), IntegratorConfig(7))
    assert np.allclose(out.amplitudes, psi.amplitudes, atol=1e-15)


def test_two_pulse_protocol_against_closed_form():
    r, phi = 0.27, 0.2
    spec = dc.DCProtocolSpec(hyperfine.PolarizationEllipse.in_plane(1.0, r), phi=phi, theta2=np.pi / 2)
    assert abs(dc.simulate_dc_protocol(spec) - dc.p2_exact(phi, np.pi / 2, r)) < 1e-4


def test_dimension_mismatch():
    with pytest.raises(ContractError):
        evolve(StateVector.basis(0, 3), HamiltonianSchedule.constant(SIGMA_X, 1.0))


def test_non_finite_hamiltonian():
    bad = HamiltonianSchedule.from_pauli(lambda t: (0.0, np.nan * t, 0.0, 0.0), 0.0, 1.0)
    with pytest.raises(ContractError):
        evolve(StateVector.basis(0, 2), bad, IntegratorConfig(4))


def test_state_vector_invariants():
    with pytest.raises(ContractError):
        StateVector(np.array([1.0, 1.0]))
    with pytest.raises(ContractError):
        StateVector(np.array([1.0]))


def _chirp(t):
    return 0.2, np.cos(3 * t), 0.4 * np.sin(t), 0.5 * t


@given(st.integers(0, 2**31))
def test_norm_preserved(seed):
    rng = np.random.default_rng(seed)
    psi = StateVector.normalized(rng.normal(size=2) + 1j * rng.normal(size=2))
    out = evolve(psi, HamiltonianSchedule.from_pauli(_chirp, 0.0, 3.0), IntegratorConfig(300))
    assert abs(np.linalg.norm(out.amplitudes) ** 2 - 1) < 1e-8


def test_propagator_unitary():
    U = propagator(HamiltonianSchedule.from_pauli(_chirp, 0.0, 5.0), IntegratorConfig(2000))
    assert np.max(np.abs(U.conj().T @ U - np.eye(2))) < 1e-9


@pytest.mark.parametrize("scheme", ["midpoint", "rk4"])
def test_second_order_or_better(scheme):
    sched = HamiltonianSchedule.from_pauli(_chirp, 0.0, 3.0)
    psi = StateVector.basis(0, 2)
    ref = evolve(psi, sched, IntegratorConfig(64000)).populations
    e1 = np.max(np.abs(evolve(psi, sched, IntegratorConfig(100, scheme, True)).populations - ref))
    e2 = np.max(np.abs(evolve(psi, sched, IntegratorConfig(200, scheme, True)).populations - ref))
    assert e1 / e2 >= 3


def test_convergence_check_raises():
    sched = HamiltonianSchedule.from_pauli(_chirp, 0.0, 30.0)
    with pytest.raises(ConvergenceError):
        evolve(StateVector.basis(0, 2), sched, IntegratorConfig(20, check_convergence=True))


def test_deterministic():
    sched = HamiltonianSchedule.from_pauli(_chirp, 0.0, 3.0)
    a = propagator(sched, IntegratorConfig(999))
    b = propagator(sched, IntegratorConfig(999))
    assert np.array_equal(a, b)


def test_dyson_zero_and_constant():
    zero = HamiltonianSchedule.constant(np.zeros((2, 2)), 1.0)
    assert np.array_equal(dyson_first_order(zero, 0.0, 1.0), np.eye(2))
    H = np.array([[0.3, 0.1 - 0.2j], [0.1 + 0.2j, -0.5]])
    const = HamiltonianSchedule.constant(H, 2.0)
    assert np.allclose(dyson_first_order(const, 0.0, 2.0, 4), np.eye(2) - 2j * H, atol=1e-14)


def test_dyson_rejects_reversed_interval():
    with pytest.raises(ContractError):
        dyson_first_order(HamiltonianSchedule.constant(SIGMA_X, 1.0), 1.0, 0.0)


def test_dyson_interaction_picture_matches_linear_gamma_closed_form():
    ramp = diabatic.RampSpec(500.0, 5.0, 1.0, 1.0)
    gi, gf = ramp.gamma_i, ramp.gamma_f
    rate = (gf - gi) / ramp.T
    scale = ramp.delta * ramp.T / (gf - gi)

    def H(t):
        g = gi + rate * np.asarray(t)
        ph = np.exp(1j * scale * np.log(g / gi))
        out = np.zeros(np.shape(t) + (2, 2), dtype=complex)
        out[..., 0, 1] = 1j * rate * ph
        out[..., 1, 0] = -1j * rate * np.conj(ph)
        return out

    D = dyson_first_order(HamiltonianSchedule(H, 0.0, ramp.T, 2), 0.0, ramp.T, 64, panels=16)
    closed, _ = diabatic.epsilon_d_linear_gamma(ramp)
    assert abs(abs(D[0, 1]) ** 2 - closed) < 1e-10
