"""Acceptance criteria, one test each, at the stated tolerances."""

import time

import numpy as np

from clockmag import ac, dc, diabatic, hyperfine, sensitivity, two_spin
from clockmag.dynamics import IntegratorConfig


def test_criterion_01_two_spin_oracle(criterion):
    t0 = time.perf_counter()
    phi = np.linspace(-np.pi, np.pi, 61)
    err = 0.0
    for chi in (0.0, np.pi / 6, np.pi / 3):
        lab = np.array([two_spin.sequence_prob_S_lab(chi, p) for p in phi])
        err = max(err, float(np.max(np.abs(lab - two_spin.prob_S_closed(chi, phi)))))
    dt = time.perf_counter() - t0
    criterion("criterion 1 two-spin oracle", err < 1e-8 and dt < 5.0, f"max |lab - closed| = {err:.2e}, {dt:.2f} s")


def _first_maximum(x, y):
    k = np.nonzero((y[1:-1] >= y[:-2]) & (y[1:-1] > y[2:]))[0][0] + 1
    return x[k]


def test_criterion_02_rabi_map(criterion):
    r = 0.27
    area = np.linspace(0.0, 2 * np.pi / r, 200_001)
    at0 = _first_maximum(area, hyperfine.rabi_probability(1.0, area, 0.0, r))
    at90 = _first_maximum(area, hyperfine.rabi_probability(1.0, area, np.pi / 2, r))
    e0 = abs(at0 - np.pi) / np.pi
    e90 = abs(at90 - np.pi / r) / (np.pi / r)
    criterion(
        "criterion 2 Rabi map",
        e0 < 0.01 and e90 < 0.01,
        f"first maxima at {at0:.5f} (pi) and {at90:.4f} (pi/0.27 = {np.pi / r:.4f}); rel. errors {e0:.1e}, {e90:.1e}",
    )


def test_criterion_03_dc_protocol(criterion):
    r = 0.27
    ellipse = hyperfine.PolarizationEllipse.in_plane(1.0, r)
    phis = np.linspace(-np.pi / 2, np.pi / 2, 21)
    thetas = np.linspace(0.0, 2 * np.pi, 21)
    sim_err = 0.0
    for p in phis:
        spec = dc.DCProtocolSpec(ellipse, phi=p)
        for th in thetas:
            sim = dc.simulate_dc_protocol(spec.with_theta(th), IntegratorConfig(64))
            sim_err = max(sim_err, abs(sim - float(dc.p2_exact(p, th, r))))
    grid = np.linspace(0.0, 2 * np.pi, 128, endpoint=False)
    ph_err = 0.0
    for p in phis:
        res = dc.ramsey_scan(dc.DCProtocolSpec(ellipse, phi=p), grid)
        b = hyperfine.beta(p, r)
        sgn = 1.0 if p >= 0 else -1.0
        ref = np.mod(np.pi - sgn * np.arccos(np.cos(p) / b), 2 * np.pi)
        d = abs(res.theta_f - ref)
        ph_err = max(ph_err, min(d, 2 * np.pi - d))
    criterion(
        "criterion 3 DC protocol",
        sim_err < 1e-6 and ph_err < 2e-3,
        f"max |sim - exact| = {sim_err:.2e}, max fringe-phase error = {ph_err:.2e} rad",
    )


def test_criterion_04_fringe_phase_limits(criterion):
    phi = np.linspace(-np.pi / 2, np.pi / 2, 201)
    unit = float(np.max(np.abs(dc.fringe_phase(phi, 1.0) - (np.pi - phi))))
    ok_unit = unit < 8 * np.finfo(float).eps * np.pi
    w = 0.05
    jump = float(abs(dc.fringe_phase(-w, 0.01) - dc.fringe_phase(w, 0.01)))
    ok_jump = abs(jump - np.pi) < 0.05
    criterion(
        "criterion 4 fringe-phase limits",
        ok_unit and ok_jump,
        f"Omega_ratio=1: max |theta_f - (pi - phi)| = {unit:.1e}; "
        f"Omega_ratio=0.01: jump across |phi| < {w} is {jump:.4f} (target pi +- 0.05)",
    )


def test_criterion_05_ac_filter(criterion):
    t0 = time.perf_counter()
    drive = ac.ACDriveSpec.fig7()
    phi0 = 0.005
    ratios = np.linspace(0.5, 1.5, 101)
    disc, sim_peak = 0.0, None
    for x in ratios:
        sig = ac.ACSignal(phi0, x * drive.omega_m, 0.0)
        sim = ac.simulate_ac(sig, drive)[1][-1]
        lin = ac.filter_response(sig, drive)
        disc = max(disc, abs(sim - lin))
        if abs(x - 1.0) < 1e-12:
            sim_peak = sim
    target = 0.5 + 2 * np.pi * drive.n * phi0 * drive.Omega2_mag / drive.omega_m
    peak_err = abs(sim_peak - target) / target
    dt = time.perf_counter() - t0
    criterion(
        "criterion 5 AC filter",
        disc < 0.01 and peak_err < 0.05 and dt < 60,
        f"max |sim - linear| = {disc:.3f}; simulated peak {sim_peak:.4f} vs {target:.4f} "
        f"(rel. {peak_err:.2f}); {dt:.1f} s",
    )


def test_criterion_06_diabatic_stringency(criterion):
    t0 = time.perf_counter()
    d = 1.0
    worst, violations = 0.0, 0
    for a in np.logspace(np.log10(10), np.log10(200), 10):
        for b in np.logspace(np.log10(2), np.log10(50), 10):
            ramp = diabatic.RampSpec(a * b * d, b * d, d, 1.0 / d)
            sim = diabatic.simulate_ramp(ramp)
            bound = diabatic.epsilon_d_bound(ramp.B_f, d, ramp.T)
            violations += bound < sim
            worst = max(worst, sim)
    dt = time.perf_counter() - t0
    ok = violations == 0 and abs(worst - 0.078) <= 0.1 * 0.078 and dt < 120
    criterion(
        "criterion 6 diabatic stringency",
        ok,
        f"bound violations {violations}/100; max simulated eps_D = {worst:.4f} (target 0.078 +- 10%); {dt:.1f} s",
    )


def test_criterion_07_sensitivity_optimum(criterion):
    B = np.logspace(0, 2, 40)
    Om = np.logspace(np.log10(0.5), 2, 40)
    res = sensitivity.numeric_optimize(B, Om, 1)
    ridge = res.ridge()
    rows = np.nonzero(ridge >= 0)[0]
    target = np.array([np.argmin(np.abs(np.log(Om) - np.log(B[i] / np.sqrt(2)))) for i in rows])
    cells = int(np.max(np.abs(ridge[rows] - target)))
    T_ridge = float(np.max(res.T_opt[rows, ridge[rows]]))
    fine = np.logspace(np.log10(0.5), 2, 4000)
    best = sensitivity.numeric_optimize([10.0, 50.0], fine, 1).column_minimum() / (2 * np.sqrt(2))
    ok = cells <= 1 and T_ridge < 0.02 and abs(best[1] - 1) < 0.02 and abs(best[0] - 1) < 0.10
    criterion(
        "criterion 7 sensitivity optimum",
        ok,
        f"ridge offset <= {cells} cell over {rows.size} rows; max ridge T = {T_ridge:.3g}; "
        f"min/(2 sqrt 2) = {best[1]:.4f} at B=50, {best[0]:.4f} at B=10",
    )


def test_criterion_08_self_consistent_series(criterion):
    B = np.logspace(1, 2, 12)
    slopes = []
    for N in (1, 10):
        got = np.array([sensitivity.self_consistent_sensitivity(b, 0.0, N).delta_tilde for b in B])
        series = 2 * np.sqrt(2) / np.sqrt(N) * (1 + 1 / B**2 + 8 / (N * B**2))
        slopes.append(-np.polyfit(np.log(B), np.log(np.abs(got - series)), 1)[0])
    criterion(
        "criterion 8 self-consistent series",
        min(slopes) >= 3.5,
        f"residual exponents {slopes[0]:.2f} (N=1), {slopes[1]:.2f} (N=10)",
    )


def test_criterion_09_cramer_rao_monte_carlo(criterion):
    N = 10_000
    ratios = []
    seeds = np.random.SeedSequence(20240601).generate_state(3)
    for seed, (B_f, r) in zip(seeds, ((1.0, 0.27), (2.0, 1.0), (0.5, 3.0))):
        m = sensitivity.mle_monte_carlo(B_f, r, N, trials=400, seed=int(seed))
        ratios.append(m.std / (B_f / (np.sqrt(N) * r)))
    ok = all(abs(x - 1) < 0.15 for x in ratios)
    criterion("criterion 9 Cramér-Rao Monte-Carlo", ok, "sigma / bound = " + ", ".join(f"{x:.3f}" for x in ratios))


def test_criterion_10_zeeman_parity(criterion):
    N, tau = 100, 1.0
    z = sensitivity.zeeman_sensitivity(tau, N)
    target = 2 / (np.sqrt(N) * tau)
    geo = 2 * np.sqrt(2) / np.sqrt(N)
    ratio = geo / z
    ok = abs(z - target) / target < 1e-6 and abs(ratio - np.sqrt(2)) / np.sqrt(2) < 1e-6
    criterion(
        "criterion 10 Zeeman baseline parity",
        ok,
        f"Zeeman sensitivity {z:.8f} vs 2/(sqrt(N) tau) = {target:.8f}; geometric/Zeeman = {ratio:.6f} vs sqrt 2",
    )
