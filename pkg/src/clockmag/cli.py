"""
Command-line front end.

    clockmag reproduce <figure> [--config run.yaml] [--out DIR] [--seed S]
    clockmag sweep --config sweep.yaml [--out DIR] [--threads K]
    clockmag validate --config run.yaml

Every command writes ``<name>.csv`` (names row, units row, data) and a
``<name>.json`` sidecar with the toolkit version, the config hash, the seed
and a summary of extracted scalars.

Exit codes: 0 success, 1 validation findings, 2 usage or config error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import ac, dc, diabatic, hyperfine, sensitivity, two_spin
from .config import ConfigError, load_config
from .dynamics import IntegratorConfig
from .errors import ContractError, ConvergenceError, RegimeError, SingularConfigurationError
from .tables import ResultTable, metadata

__all__ = ["main", "FIGURES", "OPERATIONS", "reproduce", "sweep", "validate", "repetitions"]

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
MIN_STEPS_PER_PERIOD = 50
REGIME_RATIO_F = 2.0
REGIME_RATIO_I = 10.0
NUMERIC_ERRORS = (ConvergenceError, RegimeError, SingularConfigurationError, FloatingPointError, np.linalg.LinAlgError)


def _resolution(cfg):
    spp = int(cfg["integrator"]["steps_per_period"])
    if spp < MIN_STEPS_PER_PERIOD:
        raise ConvergenceError(f"{spp} steps per period; need at least {MIN_STEPS_PER_PERIOD}")
    return spp


def _first_max(x, y):
    """Location of the first local maximum of a sampled curve, parabola-refined."""
    k = np.nonzero((y[1:-1] >= y[:-2]) & (y[1:-1] > y[2:]))[0]
    if k.size == 0:
        return float("nan")
    i = k[0] + 1
    den = y[i - 1] - 2 * y[i] + y[i + 1]
    h = x[i] - x[i - 1]
    return float(x[i] + 0.5 * h * (y[i - 1] - y[i + 1]) / den)


def _logspace(lo, hi, n):
    return np.logspace(np.log10(lo), np.log10(hi), int(n))


# figure reproductions ------------------------------------------------------


def fig_two_spin_fringe(cfg):
    c = cfg["two-spin"]
    phi = np.linspace(-np.pi, np.pi, int(c["phi_points"]))
    cols, units, data = ["phi"], ["rad"], [phi]
    summary = {"value_at_phi0": [], "max_lab_vs_closed": []}
    for chi in c["chi"]:
        closed = two_spin.prob_S_closed(chi, phi)
        cols.append(f"P_S_chi={chi:.6g}")
        units.append("probability")
        data.append(closed)
        summary["value_at_phi0"].append(float(two_spin.prob_S_closed(chi, 0.0)))
        if c["simulate"]:
            lab = np.array([two_spin.sequence_prob_S_lab(chi, p) for p in phi])
            cols.append(f"P_S_lab_chi={chi:.6g}")
            units.append("probability")
            data.append(lab)
            summary["max_lab_vs_closed"].append(float(np.max(np.abs(lab - closed))))
    return ResultTable(cols, units, np.column_stack(data), summary=summary)


def fig_rabi_scan(cfg):
    c = cfg["rabi-scan"]
    area = np.linspace(0.0, float(c["area_max"]), int(c["points"]))
    cols, units, data = ["Omega1_T"], ["rad"], [area]
    first, expected = [], []
    for phi in c["phi"]:
        p = hyperfine.rabi_probability(1.0, area, phi, c["Omega_ratio"])
        cols.append(f"P_phi={phi:.6g}")
        units.append("probability")
        data.append(p)
        first.append(_first_max(area, p))
        expected.append(float(np.pi / hyperfine.beta(phi, c["Omega_ratio"])))
    summary = {"phi": list(c["phi"]), "first_maximum": first, "expected_first_maximum": expected}
    return ResultTable(cols, units, np.column_stack(data), summary=summary)


def fig_dc_fringe(cfg):
    c = cfg["dc-ramsey"]
    theta = np.linspace(0.0, 2 * np.pi, int(c["theta_points"]), endpoint=False)
    ellipse = hyperfine.PolarizationEllipse.in_plane(1.0, c["Omega_ratio"], 0.0)
    cols, units, data = ["theta"], ["rad"], [theta]
    extracted, analytic = [], []
    for phi in c["phi"]:
        spec = dc.DCProtocolSpec(ellipse, phi=phi)
        res = dc.ramsey_scan(spec, theta, simulate=bool(c["simulate"]),
                             integrator=IntegratorConfig(int(cfg["integrator"]["step_count"])))
        cols.append(f"P2_phi={phi:.6g}")
        units.append("probability")
        data.append(res.P2_values)
        extracted.append(res.theta_f)
        analytic.append(float(dc.fringe_phase(phi, c["Omega_ratio"])))
    summary = {"phi": list(c["phi"]), "theta_f_extracted": extracted, "theta_f_analytic": analytic}
    return ResultTable(cols, units, np.column_stack(data), summary=summary)


def fig_fringe_phase(cfg):
    c = cfg["dc-ramsey"]
    phi = np.linspace(-np.pi / 2, np.pi / 2, int(c["fringe_phi_points"]))
    cols, units, data = ["phi"], ["rad"], [phi]
    for r in c["fringe_Omega_ratios"]:
        cols.append(f"theta_f_ratio={r:.6g}")
        units.append("rad")
        data.append(dc.fringe_phase(phi, r))
    return ResultTable(cols, units, np.column_stack(data), summary={"Omega_ratios": list(c["fringe_Omega_ratios"])})


def _ac_drive(c):
    if c["Omega1"] is None:
        return ac.ACDriveSpec.fig7(c["omega_m"], int(c["n"]), c["Omega_ratio"], c["phi0"])
    return ac.ACDriveSpec(c["Omega1"], c["Omega_ratio"], c["omega_m"], int(c["n"]))


def fig_ac_filter(cfg):
    c = cfg["ac-filter"]
    drive = _ac_drive(c)
    ratio = np.linspace(c["ratio_min"], c["ratio_max"], int(c["points"]))
    cols = ["omega0_over_omega_m", "P2_printed", "P2_consistent", "P2_dressed"]
    data = {k: [] for k in cols}
    sim = []
    spp = _resolution(cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for r in ratio:
            sig = ac.ACSignal(c["phi0"], r * drive.omega_m, 0.0)
            data["omega0_over_omega_m"].append(r)
            for norm in ("printed", "consistent", "dressed"):
                data[f"P2_{norm}"].append(float(ac.filter_response(sig, drive, norm)))
            if c["simulate"]:
                wmax = max(abs(sig.omega0), drive.omega_m, drive.Omega1_mag)
                steps = int(np.ceil(spp * drive.duration * wmax / (2 * np.pi)))
                sim.append(float(ac.simulate_ac(sig, drive, IntegratorConfig(steps))[1][-1]))
    rows = [data[k] for k in cols]
    summary = {"Omega1": drive.Omega1_mag, "printed_peak": 0.5 + 2 * np.pi * drive.n * c["phi0"] * drive.Omega2_mag / drive.omega_m}
    if c["simulate"]:
        cols.append("P2_simulated")
        rows.append(sim)
        s = np.array(sim)
        summary["simulated_peak"] = float(s[np.argmin(np.abs(ratio - 1.0))])
        for norm in ("printed", "consistent", "dressed"):
            summary[f"max_discrepancy_{norm}"] = float(np.max(np.abs(s - np.array(data[f"P2_{norm}"]))))
    units = ["dimensionless"] + ["probability"] * (len(cols) - 1)
    return ResultTable(cols, units, np.column_stack(rows), summary=summary)


def fig_diabatic_ramp(cfg):
    c = cfg["diabatic"]
    spp = _resolution(cfg)
    T = _logspace(c["T_min"], c["T_max"], c["T_points"])
    rows = []
    for t in T:
        rg = diabatic.RampSpec(c["B_i"], c["B_f"], c["delta"], t, "linear-gamma")
        rb = diabatic.RampSpec(c["B_i"], c["B_f"], c["delta"], t, "linear-B")
        closed, bound = diabatic.epsilon_d_linear_gamma(rg)
        rows.append([t, diabatic.simulate_ramp(rg, steps_per_period=spp), closed, bound,
                     diabatic.simulate_ramp(rb, steps_per_period=spp)])
    rows = np.array(rows)
    worse = rows[:, 4] >= rows[:, 1]
    # shortest ramp time beyond which the linear-B profile is always worse
    k = len(worse) - int(np.argmin(worse[::-1])) if not worse.all() else 0
    summary = {"bound_holds": bool(np.all(rows[:, 3] >= rows[:, 1])),
               "linear_B_worse_from_T": float(rows[k, 0]) if k < len(worse) else float("nan")}
    cols = ["T", "eps_sim_linear_gamma", "eps_closed", "eps_bound", "eps_sim_linear_B"]
    return ResultTable(cols, ["s"] + ["probability"] * 4, rows, summary=summary)


def fig_diabatic_plane(cfg):
    c = cfg["diabatic"]
    spp = _resolution(cfg)
    ri = _logspace(*c["ratio_i"], c["plane_points"])
    rf = _logspace(*c["ratio_f"], c["plane_points"])
    d = float(c["delta"])
    T = float(c["T_plane"]) / d
    rows = []
    for a in ri:
        for b in rf:
            ramp = diabatic.RampSpec(a * b * d, b * d, d, T, "linear-gamma")
            sim = diabatic.simulate_ramp(ramp, steps_per_period=spp)
            bound = float(diabatic.epsilon_d_bound(ramp.B_f, d, T))
            rows.append([a, b, sim, bound, (bound - sim) / sim])
    rows = np.array(rows)
    k = int(np.argmax(rows[:, 2]))
    summary = {"max_epsilon_d": float(rows[k, 2]), "argmax_ratio_i": float(rows[k, 0]),
               "argmax_ratio_f": float(rows[k, 1]), "bound_violations": int(np.sum(rows[:, 4] < 0))}
    cols = ["B_i_over_B_f", "B_f_over_delta", "eps_sim", "eps_bound", "relative_margin"]
    return ResultTable(cols, ["dimensionless"] * 2 + ["probability"] * 2 + ["dimensionless"], rows, summary=summary)


def repetitions(cfg) -> int:
    """``N`` from the config, or ``n V T_total / tau_clk`` when all three are given."""
    c = cfg["sensitivity"]
    if all(c[k] is not None for k in ("density", "volume", "T_total")):
        return max(1, int(round(c["density"] * c["volume"] * c["T_total"] / c["tau_clk"])))
    return int(c["N"])


def fig_sensitivity_plane(cfg):
    c = cfg["sensitivity"]
    N = repetitions(cfg)
    n = int(c["points"])
    B = _logspace(*c["B_range"], n)
    Om = _logspace(*c["Omega_range"], n)
    res = sensitivity.numeric_optimize(B, Om, N, c["T_max"], c["tol"], c["mask_threshold"])
    Bg, Og = np.meshgrid(B, Om, indexing="ij")
    rows = np.column_stack([Bg.ravel(), Og.ravel(), res.delta_tilde.ravel(), res.T_opt.ravel(),
                            res.eps_pb.ravel(), res.eps_d.ravel(), res.mask.ravel().astype(float)])
    ridge = res.ridge()
    ok = ridge >= 0
    fine = sensitivity.numeric_optimize([c["B_report"]], _logspace(*c["Omega_range"], 4000), N,
                                        c["T_max"], c["tol"], c["mask_threshold"])
    best = float(fine.column_minimum()[0])
    summary = {
        "N": N,
        "ridge_B": B[ok],
        "ridge_Omega_ratio": Om[ridge[ok]],
        "ridge_T_opt_max": float(np.max(res.T_opt[ok, ridge[ok]])) if ok.any() else float("nan"),
        "B_report": float(c["B_report"]),
        "min_delta_tilde": best,
        "min_delta_tilde_over_2sqrt2": best * np.sqrt(N) / (2 * np.sqrt(2)),
    }
    cols = ["B_tilde_f", "Omega_ratio", "delta_tilde", "T_opt", "eps_pb", "eps_d", "masked"]
    units = ["dimensionless"] * 7
    return ResultTable(cols, units, rows, summary=summary)


FIGURES = {
    "two-spin-fringe": fig_two_spin_fringe,
    "rabi-scan": fig_rabi_scan,
    "dc-fringe": fig_dc_fringe,
    "fringe-phase": fig_fringe_phase,
    "ac-filter": fig_ac_filter,
    "diabatic-ramp": fig_diabatic_ramp,
    "diabatic-plane": fig_diabatic_plane,
    "sensitivity-plane": fig_sensitivity_plane,
}


def reproduce(figure: str, cfg: dict, out_dir) -> ResultTable:
    """Compute one figure table and write it to ``out_dir``."""
    table = FIGURES[figure](cfg)
    table.metadata = metadata(cfg, cfg["seed"], f"reproduce {figure}")
    table.write(out_dir, figure)
    return table


# sweeps --------------------------------------------------------------------


def _op_mle(B_f, Omega_ratio, N, trials, delta_true, seed):
    r = sensitivity.mle_monte_carlo(B_f, Omega_ratio, int(N), int(trials), delta_true, seed)
    return {"std": r.std, "cramer_rao": r.cramer_rao}


def _op_ramp(B_i, B_f, delta, T, profile_linear_B):
    ramp = diabatic.RampSpec(B_i, B_f, delta, T, "linear-B" if profile_linear_B else "linear-gamma")
    return {"eps_sim": diabatic.simulate_ramp(ramp), "eps_bound": float(diabatic.epsilon_d_bound(B_f, delta, T))}


def _op_full(B_tilde_f, Omega_ratio, T_tilde, N):
    r = sensitivity.full_sensitivity(sensitivity.DimensionlessPoint(B_tilde_f, Omega_ratio, T_tilde, int(N)))
    return {"delta_tilde": r.delta_tilde, "eps_pb": r.eps_pb, "eps_d": r.eps_d}


def _op_filter(phi0, omega0, alpha, Omega1, Omega_ratio, omega_m, n, dressed):
    drive = ac.ACDriveSpec(Omega1, Omega_ratio, omega_m, int(n))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p = ac.filter_response(ac.ACSignal(phi0, omega0, alpha), drive, "dressed" if dressed else "printed")
    return {"P2": float(p)}


# name -> (function, {parameter: (unit, default)}, {output: unit}, stochastic)
REQUIRED = object()
OPERATIONS = {
    "fringe_phase": (
        lambda phi, Omega_ratio: {"theta_f": float(dc.fringe_phase(phi, Omega_ratio))},
        {"phi": ("rad", REQUIRED), "Omega_ratio": ("dimensionless", REQUIRED)},
        {"theta_f": "rad"}, False,
    ),
    "p2_exact": (
        lambda phi, theta, Omega_ratio: {"P2": float(dc.p2_exact(phi, theta, Omega_ratio))},
        {"phi": ("rad", REQUIRED), "theta": ("rad", np.pi / 2), "Omega_ratio": ("dimensionless", REQUIRED)},
        {"P2": "probability"}, False,
    ),
    "prob_S_closed": (
        lambda chi, phi: {"P_S": float(two_spin.prob_S_closed(chi, phi))},
        {"chi": ("rad", REQUIRED), "phi": ("rad", REQUIRED)},
        {"P_S": "probability"}, False,
    ),
    "rabi_probability": (
        lambda Omega1_T, phi, Omega_ratio: {"P": float(hyperfine.rabi_probability(1.0, Omega1_T, phi, Omega_ratio))},
        {"Omega1_T": ("rad", REQUIRED), "phi": ("rad", 0.0), "Omega_ratio": ("dimensionless", REQUIRED)},
        {"P": "probability"}, False,
    ),
    "simulate_ramp": (
        _op_ramp,
        {"B_i": ("rad/s", REQUIRED), "B_f": ("rad/s", REQUIRED), "delta": ("rad/s", 1.0), "T": ("s", REQUIRED),
         "profile_linear_B": ("dimensionless", False)},
        {"eps_sim": "probability", "eps_bound": "probability"}, False,
    ),
    "full_sensitivity": (
        _op_full,
        {"B_tilde_f": ("dimensionless", REQUIRED), "Omega_ratio": ("dimensionless", REQUIRED),
         "T_tilde": ("dimensionless", 0.0), "N": ("dimensionless", 1)},
        {"delta_tilde": "dimensionless", "eps_pb": "probability", "eps_d": "probability"}, False,
    ),
    "self_consistent_sensitivity": (
        lambda B_tilde_f, T_tilde, N: {
            "delta_tilde": sensitivity.self_consistent_sensitivity(B_tilde_f, T_tilde, int(N)).delta_tilde},
        {"B_tilde_f": ("dimensionless", REQUIRED), "T_tilde": ("dimensionless", 0.0), "N": ("dimensionless", 1)},
        {"delta_tilde": "dimensionless"}, False,
    ),
    "filter_response": (
        _op_filter,
        {"phi0": ("rad", REQUIRED), "omega0": ("rad/s", REQUIRED), "alpha": ("rad", 0.0), "Omega1": ("rad/s", REQUIRED),
         "Omega_ratio": ("dimensionless", REQUIRED), "omega_m": ("rad/s", 1.0), "n": ("dimensionless", 20),
         "dressed": ("dimensionless", False)},
        {"P2": "probability"}, False,
    ),
    "mle_monte_carlo": (
        _op_mle,
        {"B_f": ("rad/s", REQUIRED), "Omega_ratio": ("dimensionless", REQUIRED), "N": ("dimensionless", 10_000),
         "trials": ("dimensionless", 200), "delta_true": ("rad/s", 0.0)},
        {"std": "rad/s", "cramer_rao": "rad/s"}, True,
    ),
}


def _axis_values(spec) -> np.ndarray:
    if isinstance(spec, (list, tuple)):
        return np.sort(np.asarray(spec, dtype=float))
    if not isinstance(spec, dict):
        raise ConfigError("an axis is a list of values or {start, stop, count, scale}")
    unknown = set(spec) - {"start", "stop", "count", "scale"}
    if unknown:
        raise ConfigError(f"unknown axis keys {sorted(unknown)}")
    count = int(spec.get("count", 0))
    if count <= 0:
        return np.empty(0)
    scale = spec.get("scale", "linear")
    if scale == "linear":
        v = np.linspace(spec["start"], spec["stop"], count)
    elif scale == "log":
        v = _logspace(spec["start"], spec["stop"], count)
    else:
        raise ConfigError(f"unknown axis scale {scale!r}")
    return np.sort(v)


def sweep(cfg: dict, threads: int = 1) -> ResultTable:
    """Cartesian-product evaluation of a registered operation.

    Rows are in lexicographic order over the axes, in declaration order.
    Stochastic operations get one seed per row from the run seed.
    """
    s = cfg["sweep"]
    name = s["operation"]
    if name not in OPERATIONS:
        raise ConfigError(f"unknown operation {name!r}; choose from {sorted(OPERATIONS)}")
    fn, params, outputs, stochastic = OPERATIONS[name]
    axes = dict(s["axes"] or {})
    fixed = dict(s["fixed"] or {})
    for k in list(axes) + list(fixed):
        if k not in params:
            raise ConfigError(f"operation {name!r} has no parameter {k!r}")
    missing = [k for k, (_, d) in params.items() if d is REQUIRED and k not in axes and k not in fixed]
    if missing:
        raise ConfigError(f"missing parameters {missing}")
    values = [_axis_values(axes[k]) for k in axes]
    points = list(itertools.product(*values))
    seeds = np.random.SeedSequence(int(cfg["seed"])).spawn(len(points)) if stochastic else [None] * len(points)

    def run(i):
        kw = {k: d for k, (_, d) in params.items() if d is not REQUIRED}
        kw.update(fixed)
        kw.update(dict(zip(axes, points[i])))
        if stochastic:
            kw["seed"] = int(seeds[i].generate_state(1)[0])
        out = fn(**kw)
        return list(points[i]) + [out[o] for o in outputs]

    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        rows = list(pool.map(run, range(len(points))))
    cols = list(axes) + list(outputs)
    units = [params[k][0] for k in axes] + list(outputs.values())
    summary = {"operation": name, "fixed": fixed, "points": len(rows)}
    return ResultTable(cols, units, np.array(rows, dtype=float).reshape(len(rows), len(cols)), summary=summary)


# validation ----------------------------------------------------------------


def validate(cfg: dict) -> list:
    """Regime, linearity and resolution checks; returns findings."""
    findings = []
    spp = int(cfg["integrator"]["steps_per_period"])
    if spp < MIN_STEPS_PER_PERIOD:
        findings.append(f"integrator: {spp} steps per period under-resolves the dynamics; "
                        f"use at least {MIN_STEPS_PER_PERIOD}")
    if int(cfg["integrator"]["step_count"]) < 1:
        findings.append("integrator: step_count must be at least 1")

    d = cfg["diabatic"]
    if d["B_f"] < REGIME_RATIO_F * d["delta"] or min(d["ratio_f"]) < REGIME_RATIO_F:
        findings.append(f"regime: B_f ≫ δ violated (need B_f/δ ≥ {REGIME_RATIO_F:g})")
    if d["B_i"] < REGIME_RATIO_I * d["B_f"] or min(d["ratio_i"]) < REGIME_RATIO_I:
        findings.append(f"regime: B_i ≫ B_f violated (need B_i/B_f ≥ {REGIME_RATIO_I:g})")

    a = cfg["ac-filter"]
    try:
        drive = _ac_drive(a)
        rot = ac.rotation_angle(ac.ACSignal(a["phi0"], drive.omega_m), drive, "consistent", peak=True)
        # inclusive bound; the reference drive sits exactly on it
        if abs(rot) > ac.LINEAR_LIMIT * (1 + 1e-9):
            findings.append(f"linearity: peak rotation {abs(rot):.3g} rad exceeds pi/6")
    except ContractError as exc:
        findings.append(f"ac-filter: {exc}")

    if int(cfg["dc-ramsey"]["theta_points"]) < 8:
        findings.append("dc-ramsey: theta grid needs at least 8 points")
    for chi in cfg["two-spin"]["chi"]:
        if not 0 <= chi < np.pi / 2:
            findings.append(f"two-spin: chi = {chi} outside [0, pi/2)")
    s = cfg["sensitivity"]
    if repetitions(cfg) < 1:
        findings.append("sensitivity: N must be at least 1")
    if min(s["B_range"] + s["Omega_range"]) <= 0:
        findings.append("sensitivity: grid ranges must be positive")
    if cfg["sweep"]["operation"] is not None and cfg["sweep"]["operation"] not in OPERATIONS:
        findings.append(f"sweep: unknown operation {cfg['sweep']['operation']!r}")
    return findings


# entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clockmag", description="Clock-state geometric magnetometry toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None, help="YAML run configuration")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
        p.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")

    p = sub.add_parser("reproduce", help="compute the data behind one figure")
    p.add_argument("figure", choices=sorted(FIGURES))
    common(p)
    common(sub.add_parser("sweep", help="evaluate an operation over a parameter grid"))
    common(sub.add_parser("validate", help="check regime preconditions without running"))
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = int(args.seed)
        if args.command == "validate":
            findings = validate(cfg)
            for f in findings:
                print(f)
            if not findings:
                print("no findings")
            return EXIT_FINDINGS if findings else EXIT_OK
        if args.command == "reproduce":
            table = reproduce(args.figure, cfg, args.out)
            print(json.dumps(table.sidecar()["summary"], sort_keys=True, default=float))
            return EXIT_OK
        table = sweep(cfg, args.threads)
        table.metadata = metadata(cfg, cfg["seed"], "sweep")
        table.write(args.out, "sweep")
        print(f"wrote {len(table)} rows to {Path(args.out) / 'sweep.csv'}")
        return EXIT_OK
    except (ConfigError, ContractError, KeyError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
