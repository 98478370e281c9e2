import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import jv

from clockmag import ac
from clockmag.dynamics import IntegratorConfig
from clockmag.errors import ContractError, ConvergenceError, RegimeWarning

DRIVE = ac.ACDriveSpec.fig7()
PHI0 = 0.005


def sig(ratio, phi0=PHI0, alpha=0.0):
    return ac.ACSignal(phi0, ratio * DRIVE.omega_m, alpha)


def test_type_invariants():
    with pytest.raises(ContractError):
        ac.ACSignal(-0.1, 1.0)
    with pytest.raises(ContractError):
        ac.ACSignal(0.1, 1.0, "uniform")
    with pytest.raises(ContractError):
        ac.ACDriveSpec(1.0, 3.0, 1.0, 0)
    with pytest.raises(ContractError):
        ac.ACDriveSpec(1.0, 3.0, 0.0, 5)
    with pytest.raises(ContractError):
        ac.rotation_angle(ac.ACSignal(0.1, 1.0, "random"), DRIVE)


def test_zero_signal():
    for norm in ac.NORMALIZATION:
        assert ac.filter_response(sig(1.3, 0.0), DRIVE, norm) == 0.5
    assert np.array_equal(ac.first_order_unitary(sig(0.8, 0.0), DRIVE), np.eye(2))
    assert ac.unlocked_spectrometer(DRIVE, sig(1.1, 0.0)) == 0.0


@pytest.mark.filterwarnings("ignore::clockmag.errors.RegimeWarning")
def test_resonance_value():
    peak = 0.5 + 2 * np.pi * DRIVE.n * PHI0 * DRIVE.Omega2_mag / DRIVE.omega_m
    assert ac.filter_response(sig(1.0), DRIVE) == pytest.approx(peak, rel=1e-12)
    # continuous through the resonance switch
    assert ac.filter_response(sig(1.0 + 1e-5), DRIVE) == pytest.approx(peak, rel=1e-5)


def test_normalizations_differ_by_four():
    s = sig(1.13)
    a = ac.rotation_angle(s, DRIVE, "printed")
    assert ac.rotation_angle(s, DRIVE, "consistent") == pytest.approx(a / 4, rel=1e-14)
    with pytest.raises(ContractError):
        ac.rotation_angle(s, DRIVE, "other")


@pytest.mark.filterwarnings("ignore::clockmag.errors.RegimeWarning")
def test_half_width():
    n = DRIVE.n
    x = np.linspace(0.0, 1.5 / n, 30001)
    dev = np.array([ac.filter_response(sig(1.0 + d), DRIVE) - 0.5 for d in x])
    half = x[np.argmax(dev < 0.5 * dev[0])]
    # sinc(u) = 1/2 at u = 1.8955
    assert half == pytest.approx(0.6034 / (2 * n), rel=0.01)
    assert half == pytest.approx(1 / (2 * n), rel=0.5)


def test_linearity_warning():
    with pytest.warns(RegimeWarning):
        ac.filter_response(sig(1.0, 0.02), DRIVE, "consistent")
    big = ac.rotation_angle(sig(1.0), DRIVE, "consistent", peak=True)
    assert big == pytest.approx(np.pi / 6, rel=1e-12)


def test_first_order_unitary_resonance_angle():
    U = ac.first_order_unitary(sig(1.0), DRIVE)
    a = 2 * np.pi * DRIVE.n * PHI0 * DRIVE.Omega2_mag / DRIVE.omega_m
    assert np.allclose(U, np.cos(a) * np.eye(2) + 1j * np.sin(a) * np.array([[0, 1], [1, 0]]), atol=1e-14)


@given(st.floats(0.5, 1.5), st.floats(0, 2 * np.pi))
def test_first_order_unitary_matches_response(ratio, alpha):
    s = sig(ratio, 0.001, alpha)
    psi = ac.first_order_unitary(s, DRIVE, "consistent") @ ac.ac_initial_state()
    assert abs(psi[0]) ** 2 == pytest.approx(ac.filter_response(s, DRIVE, "consistent", linear=False), abs=1e-14)


@settings(max_examples=25)
@given(st.floats(0.2, 3.0), st.floats(0, 2 * np.pi))
def test_filter_weight_matches_quadrature(omega, alpha):
    wm, n = 1.0, 3
    T = 2 * np.pi * n / wm
    ref = quad(lambda t: np.cos(wm * t) * np.cos(omega * t + alpha), 0, T, limit=400)[0]
    assert ac.filter_weight(omega, wm, n, alpha) == pytest.approx(ref, abs=1e-8)


@settings(max_examples=15)
@given(st.floats(0.2, 3.0), st.floats(0, 2 * np.pi), st.floats(0.0, 2.0))
def test_dressed_weight_matches_quadrature(omega, alpha, z):
    wm, n = 1.0, 3
    T = 2 * np.pi * n / wm
    ref = quad(lambda t: np.cos(wm * t) * np.cos(z * np.sin(wm * t)) * np.cos(omega * t + alpha), 0, T, limit=800)[0]
    assert ac.filter_weight(omega, wm, n, alpha, dressing=z) == pytest.approx(ref, abs=1e-8)


def test_unlocked_peak_value():
    ref = np.sqrt(2) * np.pi * DRIVE.n * DRIVE.Omega2_mag * PHI0 / DRIVE.omega_m
    assert ac.unlocked_spectrometer(DRIVE, sig(1.0)) == pytest.approx(ref, rel=1e-12)


@given(st.floats(0.05, 3.0).filter(lambda x: abs(x - 1) > 1e-3))
def test_unlocked_symmetric_in_frequency(ratio):
    a = ac.unlocked_spectrometer(DRIVE, sig(ratio))
    b = ac.unlocked_spectrometer(DRIVE, sig(-ratio))
    assert a == pytest.approx(b, rel=1e-12)


@pytest.mark.parametrize("ratio", [0.9, 1.0, 1.07])
def test_unlocked_monte_carlo(ratio):
    exact = ac.unlocked_spectrometer(DRIVE, sig(ratio))
    mc = ac.unlocked_spectrometer(DRIVE, sig(ratio), samples=10_000, seed=7)
    assert mc == pytest.approx(exact, rel=0.03)


def test_unlocked_from_probabilities():
    with pytest.raises(ContractError):
        ac.unlocked_spectrometer(DRIVE, sig(1.0), probabilities=[0.5])
    assert ac.unlocked_spectrometer(DRIVE, sig(1.0), probabilities=[0.4, 0.6]) == pytest.approx(0.1)
    with pytest.raises(ContractError):
        ac.unlocked_spectrometer(DRIVE, sig(1.0), samples=1)


def test_unlocked_convergence_rate():
    s = sig(0.93)
    exact = ac.unlocked_spectrometer(DRIVE, s)
    Ns = np.array([100, 400, 1600, 6400, 25600])
    err = [
        np.sqrt(np.mean([(ac.unlocked_spectrometer(DRIVE, s, samples=N, seed=k) - exact) ** 2 for k in range(60)]))
        for N in Ns
    ]
    assert np.polyfit(np.log(Ns), np.log(err), 1)[0] == pytest.approx(-0.5, abs=0.1)


def test_flat_trace_without_signal():
    _, P = ac.simulate_ac(sig(1.0, 0.0), DRIVE)
    assert np.max(np.abs(P - 0.5)) < 1e-12


def test_under_resolved_integration():
    with pytest.raises(ConvergenceError):
        ac.simulate_ac(sig(1.0), DRIVE, IntegratorConfig(10))


def test_model_choice_validated():
    with pytest.raises(ContractError):
        ac.simulate_ac(sig(1.0), DRIVE, model="cubic")


def test_geometric_and_linear_models_agree_for_small_signal():
    _, a = ac.simulate_ac(sig(1.0, 1e-4), DRIVE, model="linear")
    _, b = ac.simulate_ac(sig(1.0, 1e-4), DRIVE, model="geometric")
    assert np.max(np.abs(a - b)) < 1e-8


def _resonant_slope(n_fit=6):
    _, P = ac.simulate_ac(sig(1.0), DRIVE)
    k = np.arange(1, n_fit + 1)
    return np.polyfit(k, P[:n_fit] - 0.5, 1)[0]


def test_resonant_growth_is_linear_with_dressed_slope():
    z = DRIVE.Omega1_mag / DRIVE.omega_m
    model = 0.5 * np.pi * PHI0 * DRIVE.Omega2_mag / DRIVE.omega_m * (jv(0, z) + jv(2, z))
    assert _resonant_slope() == pytest.approx(model, rel=0.05)


@pytest.mark.xfail(strict=True, reason="the printed resonant slope is about four times the simulated one")
def test_resonant_growth_printed_slope():
    assert _resonant_slope() == pytest.approx(2 * np.pi * PHI0 * DRIVE.Omega2_mag / DRIVE.omega_m, rel=0.05)


def test_dressed_unitary_matches_simulation():
    disc = 0.0
    for x in np.linspace(0.5, 1.5, 41):
        s = sig(x)
        p = ac.filter_response(s, DRIVE, "dressed", linear=False)
        disc = max(disc, abs(ac.simulate_ac(s, DRIVE)[1][-1] - p))
    assert disc < 0.01


def test_linearized_readout_misses_the_peak():
    # the pi/6 rotation is not small enough for 1/2 + a to hold at 0.01
    s = sig(1.0)
    sim = ac.simulate_ac(s, DRIVE)[1][-1]
    assert abs(sim - ac.filter_response(s, DRIVE, "dressed")) > 0.05


def test_off_stroboscopic_oscillation():
    per = 8
    _, P = ac.simulate_ac(sig(1.0), DRIVE, samples_per_period=per)
    for k in range(1, DRIVE.n - 1):
        strobe = k * per - 1
        half = strobe + per // 2
        # local maxima at integer and half-integer periods
        assert P[strobe] > P[strobe - 1] and P[strobe] > P[strobe + 1]
        assert P[half] > P[half - 1] and P[half] > P[half + 1]
        # the stroboscopic one is the largest within the period
        assert P[strobe + per] == P[strobe + 1 : strobe + per + 1].max()
