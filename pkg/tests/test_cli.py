import json
import math

import numpy as np
import pytest

from cvactivation.cli import main


def run(args):
    return main([str(a) for a in args])


def read_csv(path):
    meta, columns, rows = {}, None, []
    for line in path.read_text().splitlines():
        if line.startswith("# "):
            key, val = line[2:].split(": ", 1)
            meta[key] = json.loads(val)
        elif columns is None:
            columns = line.split(",")
        elif line:
            rows.append(line.split(","))
    return meta, columns, rows


def test_wigner_command(tmp_path):
    out = tmp_path / "wigner.csv"
    assert run(["wigner", "--out", out]) == 0
    meta, columns, rows = read_csv(out)
    assert columns == ["re_alpha", "im_alpha", "w_value"]
    assert meta["tool_version"]
    assert meta["config_hash"]
    assert "max_leakage" in meta
    values = np.array([[float(x) for x in row] for row in rows])
    # the single-photon grid dips to -2/pi at the origin
    assert values[:, 2].min() == pytest.approx(-2.0 / math.pi, abs=1e-4)


def test_wigner_vacuum_nonnegative(tmp_path):
    out = tmp_path / "wigner.csv"
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"state": {"kind": "fock", "n": 0}}))
    assert run(["wigner", "--config", cfgfile, "--out", out]) == 0
    _, _, rows = read_csv(out)
    assert min(float(r[2]) for r in rows) >= -1e-12


def test_negativity_depth_command(tmp_path):
    out = tmp_path / "depth.json"
    assert run(["negativity-depth", "--out", out]) == 0
    doc = json.loads(out.read_text())
    assert doc["result"]["depth"] == pytest.approx(2.0 / math.pi, abs=1e-6)
    assert doc["metadata"]["config"]["state"] == {"kind": "fock", "n": 1}


def test_loss_sweep_command(tmp_path):
    out = tmp_path / "loss.csv"
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"etas": [0.0, 0.5, 0.75, 1.0], "cutoff": 25}))
    assert run(["loss-sweep", "--config", cfgfile, "--out", out]) == 0
    meta, columns, rows = read_csv(out)
    assert columns == [
        "eta",
        "parity_expectation",
        "wn_lower_bound",
        "activated_E",
        "activated_S",
        "classification",
    ]
    table = {float(r[0]): r for r in rows}
    assert float(table[0.5][2]) == pytest.approx(0.0, abs=1e-9)
    assert float(table[1.0][2]) == pytest.approx(1.0, abs=1e-9)
    assert float(table[1.0][3]) == pytest.approx(0.5, abs=1e-9)
    assert float(table[1.0][4]) == pytest.approx(1.0, abs=1e-9)
    assert float(table[0.75][3]) == pytest.approx(0.25, abs=1e-6)


def test_loss_sweep_even_fock_reports_grid_bound(tmp_path):
    out = tmp_path / "loss2.csv"
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"etas": [1.0], "fock_n": 2, "cutoff": 25}))
    assert run(["loss-sweep", "--config", cfgfile, "--out", out]) == 0
    _, _, rows = read_csv(out)
    assert float(rows[0][1]) == pytest.approx(1.0, abs=1e-9)  # parity +1
    assert float(rows[0][2]) > 0.3  # displaced witnesses still detect |2>


def test_pure_bounds_command(tmp_path):
    out = tmp_path / "pure.json"
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"state": {"kind": "coherent", "alpha": [1.0, 0.0]}}))
    assert run(["pure-bounds", "--config", cfgfile, "--out", out]) == 0
    res = json.loads(out.read_text())["result"]
    assert res["gng_lower"] == pytest.approx(0.0, abs=1e-6)
    assert res["sng_lower"] == pytest.approx(0.0, abs=1e-6)
    assert res["activated_steering_floor_sng"] == res["sng_lower"]


def test_activate_command(tmp_path):
    out = tmp_path / "act.json"
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(
        json.dumps(
            {
                "state": {"kind": "fock", "n": 1},
                "channel": {"kind": "loss", "eta": 0.6},
                "witness": {"family": "parity"},
            }
        )
    )
    assert run(["activate", "--config", cfgfile, "--out", out]) == 0
    res = json.loads(out.read_text())["result"]
    assert res["steering_channel"]["q"] == pytest.approx(0.6, abs=1e-9)
    assert res["steering_channel"]["classification"] == "steerable_chsh_local"
    assert res["entanglement_channel"]["E"] == pytest.approx(0.1, abs=1e-9)


def test_boundary_mix_command(tmp_path):
    out = tmp_path / "bm.csv"
    assert run(["boundary-mix", "--out", out]) == 0
    _, _, rows = read_csv(out)
    for row in rows:
        assert float(row[1]) == float(row[0])
        assert float(row[2]) >= float(row[0]) - 1e-6


def test_property_suite_command(tmp_path):
    out = tmp_path / "suite.json"
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"cutoff": 20, "resolution": 25}))
    assert run(["property-suite", "--config", cfgfile, "--out", out]) == 0
    res = json.loads(out.read_text())["result"]
    assert res["all_passed"]


def test_gkp_sweep_small(tmp_path):
    out = tmp_path / "gkp.csv"
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(
        json.dumps(
            {
                "squeezing_db": [5.0, 7.0],
                "cutoff": 20,
                "depth_resolution": 25,
                "eta": 0.9,
            }
        )
    )
    assert run(["gkp-sweep", "--config", cfgfile, "--out", out]) == 0
    meta, columns, rows = read_csv(out)
    assert columns == [
        "squeezing_db",
        "epsilon",
        "e_in",
        "e_out",
        "infidelity",
        "codeword_leakage",
    ]
    assert len(rows) == 2
    for row in rows:
        assert float(row[3]) <= float(row[2])  # e_out <= e_in


def test_gkp_sweep_identity_pipeline(tmp_path):
    out = tmp_path / "gkp_id.csv"
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(
        json.dumps(
            {
                "squeezing_db": [6.0],
                "eta": 1.0,
                "ec": False,
                "cutoff": 24,
                "depth_resolution": 30,
            }
        )
    )
    assert run(["gkp-sweep", "--config", cfgfile, "--out", out]) == 0
    _, _, rows = read_csv(out)
    (row,) = rows
    assert float(row[4]) == pytest.approx(0.0, abs=1e-9)  # infidelity
    assert float(row[3]) == pytest.approx(float(row[2]), abs=2e-3)  # e_out vs e_in


def test_byte_identical_reruns(tmp_path):
    out = tmp_path / "a.csv"
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"etas": [0.5, 0.9], "cutoff": 20}))
    assert run(["loss-sweep", "--config", cfgfile, "--out", out]) == 0
    first = out.read_bytes()
    assert run(["loss-sweep", "--config", cfgfile, "--out", out]) == 0
    assert out.read_bytes() == first


def test_config_error_exit_code(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"no_such_key": 1}))
    assert run(["loss-sweep", "--config", cfgfile, "--out", tmp_path / "x.csv"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["wigner", "--config", bad, "--out", tmp_path / "y.csv"]) == 2


def test_truncation_error_exit_code(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"state": {"kind": "coherent", "alpha": [4.0, 0.0]}, "cutoff": 10}))
    assert run(["wigner", "--config", cfgfile, "--out", tmp_path / "w.csv"]) == 3


def test_invariant_failure_exit_code(tmp_path):
    # a disc too small to integrate the marginal trips the grid validation
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(
        json.dumps(
            {
                "state": {"kind": "gkp", "epsilon": 0.25},
                "cutoff": 50,
                "radius": 1.2,
                "resolution": 30,
            }
        )
    )
    assert run(["wigner", "--config", cfgfile, "--out", tmp_path / "w.csv"]) == 4


def test_seed_list_flag(tmp_path):
    out = tmp_path / "pb.json"
    assert run(["pure-bounds", "--out", out, "--seed-list", "5,6,7"]) == 0
    doc = json.loads(out.read_text())
    assert doc["metadata"]["config"]["seeds"] == [5, 6, 7]
