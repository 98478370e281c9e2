import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from clockmag import cli
from clockmag.dc import p2_exact
from clockmag.config import ConfigError, defaults, load_config, merge_config, units_table
from clockmag.tables import ResultTable, canonical_json, config_hash


def write_config(tmp_path, data, name="run.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
    return str(p)


@pytest.mark.parametrize("figure", sorted(cli.FIGURES))
def test_every_figure_runs(figure, tmp_path):
    assert cli.main(["reproduce", figure, "--out", str(tmp_path)]) == 0
    table = ResultTable.read(tmp_path / f"{figure}.csv")
    assert len(table) > 0 and len(table.units) == len(table.columns)
    side = json.loads((tmp_path / f"{figure}.json").read_text())
    assert side["command"] == f"reproduce {figure}"
    assert side["config_hash"] == config_hash(defaults())
    assert "summary" in side and "toolkit_version" in side


def test_two_spin_fringe_values(tmp_path):
    cli.main(["reproduce", "two-spin-fringe", "--out", str(tmp_path)])
    side = json.loads((tmp_path / "two-spin-fringe.json").read_text())
    assert np.allclose(side["summary"]["value_at_phi0"], 0.5, atol=1e-12)
    assert max(side["summary"]["max_lab_vs_closed"]) < 1e-8


def test_reproduce_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert cli.main(["reproduce", "ac-filter", "--out", str(out), "--seed", "5"]) == 0
    for suffix in ("csv", "json"):
        assert (a / f"ac-filter.{suffix}").read_bytes() == (b / f"ac-filter.{suffix}").read_bytes()


def test_config_hash_is_canonical(tmp_path):
    user = {"seed": 3, "ac-filter": {"points": 11}}
    cfg = merge_config(user)
    shuffled = dict(reversed(list(cfg.items())))
    assert config_hash(cfg) == config_hash(shuffled)
    assert canonical_json(cfg) == canonical_json(shuffled)
    path = write_config(tmp_path, user)
    cli.main(["reproduce", "fringe-phase", "--config", path, "--out", str(tmp_path)])
    side = json.loads((tmp_path / "fringe-phase.json").read_text())
    assert side["config_hash"] == config_hash(cfg) and side["seed"] == 3


def test_units_table_covers_every_leaf():
    units = units_table()
    assert units["ac-filter.omega_m"] == "rad/s"
    assert units["diabatic.T_max"] == "s"
    for block, v in defaults().items():
        keys = [f"{block}.{k}" for k in v] if isinstance(v, dict) else [block]
        assert all(k in units for k in keys)


def test_unknown_key_is_usage_error(tmp_path, capsys):
    path = write_config(tmp_path, {"ac-filter": {"phase": 1.0}})
    assert cli.main(["validate", "--config", path]) == 2
    assert "unknown key" in capsys.readouterr().err
    with pytest.raises(ConfigError):
        merge_config({"colour": 1})
    with pytest.raises(ConfigError):
        merge_config({"seed": 1.5})


def test_unreadable_config(tmp_path):
    assert cli.main(["validate", "--config", str(tmp_path / "missing.yaml")]) == 2
    bad = tmp_path / "bad.yaml"
    bad.write_text("a: [1, 2", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_bad_figure_name():
    with pytest.raises(SystemExit) as exc:
        cli.main(["reproduce", "fig-99"])
    assert exc.value.code == 2


def test_validate_defaults_clean(capsys):
    assert cli.main(["validate"]) == 0
    assert "no findings" in capsys.readouterr().out


def test_validate_reports_findings(tmp_path, capsys):
    path = write_config(
        tmp_path,
        {"diabatic": {"B_f": 1.5, "delta": 1.0}, "integrator": {"steps_per_period": 10}, "ac-filter": {"phi0": 0.02,
         "Omega1": 5.0}},
    )
    assert cli.main(["validate", "--config", path]) == 1
    out = capsys.readouterr().out
    assert "B_f ≫ δ" in out and "under-resolves" in out and "linearity" in out


def test_under_resolved_run_is_numeric_failure(tmp_path):
    path = write_config(tmp_path, {"integrator": {"steps_per_period": 10}})
    assert cli.main(["reproduce", "ac-filter", "--config", path, "--out", str(tmp_path)]) == 3


def _sweep_config(tmp_path, op, axes, fixed=None, seed=0):
    return write_config(tmp_path, {"seed": seed, "sweep": {"operation": op, "axes": axes, "fixed": fixed or {}}},
                        name=f"sweep-{seed}.yaml")


def test_sweep_lexicographic_order(tmp_path):
    path = _sweep_config(tmp_path, "p2_exact", {"phi": [0.2, -0.1], "Omega_ratio": {"start": 1, "stop": 3,
                                                                                   "count": 3}})
    assert cli.main(["sweep", "--config", path, "--out", str(tmp_path), "--threads", "3"]) == 0
    t = ResultTable.read(tmp_path / "sweep.csv")
    assert t.columns == ("phi", "Omega_ratio", "P2")
    assert t.units == ("rad", "dimensionless", "probability")
    assert np.array_equal(t.rows[:, :2], [[-0.1, 1], [-0.1, 2], [-0.1, 3], [0.2, 1], [0.2, 2], [0.2, 3]])
    assert np.allclose(t.column("P2"), p2_exact(t.column("phi"), np.pi / 2, t.column("Omega_ratio")), atol=1e-11)


def test_empty_sweep(tmp_path):
    path = _sweep_config(tmp_path, "fringe_phase", {"phi": {"start": 0, "stop": 1, "count": 0}},
                         {"Omega_ratio": 0.27})
    assert cli.main(["sweep", "--config", path, "--out", str(tmp_path)]) == 0
    assert len(ResultTable.read(tmp_path / "sweep.csv")) == 0


def test_sweep_configuration_errors(tmp_path):
    for op, axes in (("nope", {}), ("fringe_phase", {"phi": [0.1]}), ("fringe_phase", {"psi": [0.1]})):
        path = _sweep_config(tmp_path, op, axes)
        assert cli.main(["sweep", "--config", path, "--out", str(tmp_path)]) == 2


def test_deterministic_sweep_ignores_seed(tmp_path):
    texts = []
    for seed in (1, 2):
        path = _sweep_config(tmp_path, "full_sensitivity", {"B_tilde_f": [10, 50], "Omega_ratio": [3, 5]}, seed=seed)
        out = tmp_path / f"o{seed}"
        assert cli.main(["sweep", "--config", path, "--out", str(out)]) == 0
        texts.append((out / "sweep.csv").read_text())
    assert texts[0] == texts[1]


def test_stochastic_sweep_is_thread_independent(tmp_path):
    path = _sweep_config(tmp_path, "mle_monte_carlo", {"B_f": [1.0, 2.0]}, {"Omega_ratio": 1.0, "trials": 50}, seed=9)
    texts = []
    for threads in ("1", "4"):
        out = tmp_path / f"t{threads}"
        assert cli.main(["sweep", "--config", path, "--out", str(out), "--threads", threads]) == 0
        texts.append((out / "sweep.csv").read_text())
    assert texts[0] == texts[1]


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "clockmag", "validate"], capture_output=True, text=True, cwd=tmp_path)
    assert r.returncode == 0 and "no findings" in r.stdout


@settings(max_examples=25)
@given(st.integers(0, 6), st.integers(1, 4), st.data())
def test_table_round_trip(m, k, data):
    rows = np.array(
        data.draw(st.lists(st.lists(st.floats(-1e300, 1e300, allow_nan=False), min_size=k, max_size=k),
                           min_size=m, max_size=m)),
        dtype=float,
    ).reshape(m, k)
    cols = [f"c{i}" for i in range(k)]
    t = ResultTable(cols, ["u"] * k, rows, metadata={"seed": 1}, summary={"x": 1.5})
    with tempfile.TemporaryDirectory() as d:
        csv_path, _ = t.write(d, "t")
        back = ResultTable.read(csv_path)
        assert back.columns == t.columns and back.units == t.units
        assert np.array_equal(back.rows, np.array([[float(f"{x:.11e}") for x in r] for r in rows]).reshape(m, k))
        assert back.summary == {"x": 1.5} and back.metadata["seed"] == 1
        assert Path(csv_path).read_text().count("\n") == m + 2


def test_out_of_regime_point_aborts_sweep(tmp_path):
    path = _sweep_config(tmp_path, "full_sensitivity", {"B_tilde_f": [10], "Omega_ratio": [30]})
    assert cli.main(["sweep", "--config", path, "--out", str(tmp_path)]) == 3
