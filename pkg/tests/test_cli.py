import json

import pytest

from greedyrelay import cli
from greedyrelay.schema import validate_report

UNIT2 = {"type": "awgn_fd", "n": 2, "gain_sq": [[0, 1], [1, 0]], "powers": [1, 1], "noise_power": 1.0}
UNIT4 = {"type": "awgn_fd", "n": 4, "gain_sq": [[0 if i == j else 1 for j in range(4)] for i in range(4)],
         "powers": [1, 1, 1, 1], "noise_power": 1.0, "rates": [0.1, 0.1, 0.1, 0.1]}
HD2 = {**UNIT2, "type": "awgn_hd", "schedule": {"lengths": [1, 1], "transmitters": [[1], [2]]}}


def write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg) if not isinstance(cfg, str) else cfg)
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_check_exit_codes(tmp_path, capsys):
    code, out = run(capsys, "check", "--config", write(tmp_path, {**UNIT2, "rates": [0.9, 0.9]}))
    assert code == 0
    assert json.loads(out.out)["feasible"] is True
    code, out = run(capsys, "check", "--config", write(tmp_path, {**UNIT2, "rates": [1.1, 0.5]}))
    assert code == 1
    assert json.loads(out.out)["violated_masks"] == [2]


def test_malformed_json(tmp_path, capsys):
    code, out = run(capsys, "check", "--config", write(tmp_path, '{"type": "awgn_fd",\n  "n": }'))
    assert code == 2
    assert ":2:" in out.err


def test_schema_field_error(tmp_path, capsys):
    code, out = run(capsys, "check", "--config", write(tmp_path, {**UNIT2, "rates": [-1, 0]}))
    assert code == 2
    assert "rates[0]" in out.err


def test_missing_config_and_bad_flag(tmp_path, capsys):
    assert run(capsys, "check", "--config", str(tmp_path / "nope.json"))[0] == 2
    assert run(capsys, "check")[0] == 2


def test_guard_exit(tmp_path, capsys):
    big = {"type": "awgn_fd", "n": 21, "gain_sq": [[1] * 21] * 21, "powers": [1] * 21,
           "noise_power": 1, "rates": [0] * 21}
    code, out = run(capsys, "check", "--config", write(tmp_path, big))
    assert code == 3
    assert "enumeration_guard" in out.err


def test_validate_reports_problems(tmp_path, capsys):
    code, out = run(capsys, "validate", "--config", write(tmp_path, {**UNIT2, "noise_power": 0}))
    assert code == 1
    assert "noise must be positive" in json.loads(out.out)["problems"][0]


def test_symrate(tmp_path, capsys):
    code, out = run(capsys, "symrate", "--config", write(tmp_path, UNIT2))
    assert code == 0
    assert json.loads(out.out)["rate_bits"] == pytest.approx(1.0, abs=1e-6)
    code, out = run(capsys, "symrate", "--config", write(tmp_path, HD2), "--tol", "1e-8")
    assert json.loads(out.out)["rate_bits"] == pytest.approx(0.5, abs=1e-8)


def test_boundary_rows(tmp_path, capsys):
    code, out = run(capsys, "boundary", "--config", write(tmp_path, UNIT2), "--directions", "8",
                    "--format", "csv", "--out", str(tmp_path / "o"))
    assert code == 0
    assert len(out.out.strip().splitlines()) == 9
    assert (tmp_path / "o" / "boundary.json").exists()


def test_hdopt(tmp_path, capsys):
    cfg = {**UNIT2, "type": "awgn_hd", "phases": 2, "candidates": [[1], [2]], "resolution": 0.5}
    code, out = run(capsys, "hdopt", "--config", write(tmp_path, cfg))
    rep = json.loads(out.out)
    assert code == 0
    assert rep["transmitters"] == [[1], [2]] and rep["lengths"] == [1, 1]
    assert rep["rate_bits"] == pytest.approx(0.5, abs=1e-6)


def test_simulate_n4(tmp_path, capsys):
    code, out = run(capsys, "simulate", "--config", write(tmp_path, UNIT4), "--horizon", "200",
                    "--oracle", "adversarial_heuristic", "--out", str(tmp_path / "o"))
    rep = json.loads(out.out)
    assert code == 0
    assert rep["completion_block"] <= 4 and rep["bound_ok"]
    assert rep["delays"]["stabilized"]
    assert (tmp_path / "o" / "trace.csv").read_text().startswith("block,node,coverage_mask")


def test_simulate_infeasible(tmp_path, capsys):
    code, _ = run(capsys, "simulate", "--config", write(tmp_path, {**UNIT2, "rates": [2, 2]}))
    assert code == 1


def test_flags_override_config(tmp_path, capsys):
    cfg = {**UNIT2, "rates": [0.9, 0.9], "margin": 0.5}
    assert run(capsys, "check", "--config", write(tmp_path, cfg))[0] == 1
    assert run(capsys, "check", "--config", write(tmp_path, cfg), "--margin", "0")[0] == 0


@pytest.mark.parametrize("cmd,cfg,extra", [
    ("validate", UNIT2, []),
    ("check", {**UNIT2, "rates": [0.3, 0.4]}, []),
    ("check", {**UNIT2, "rates": [3, 0.4]}, []),
    ("symrate", HD2, []),
    ("boundary", UNIT4, ["--directions", "3"]),
    ("hdopt", {**UNIT2, "resolution": 0.5}, []),
    ("simulate", UNIT4, ["--oracle", "random(5)", "--horizon", "40"]),
])
def test_reports_roundtrip_and_deterministic(tmp_path, capsys, cmd, cfg, extra):
    path = write(tmp_path, cfg)
    outs = []
    for k in range(2):
        d = tmp_path / f"o{k}"
        run(capsys, cmd, "--config", path, "--out", str(d), "--seed", "17", *extra)
        outs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    assert outs[0] == outs[1]
    for name, blob in outs[0].items():
        if name.endswith(".json"):
            rep = json.loads(blob)
            validate_report(rep)
            assert rep["seed"] == 17
