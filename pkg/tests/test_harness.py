import csv
import json
import math
import re

import numpy as np
import pytest

from varprod import cli
from varprod.descriptors import DescriptorError, parse_observables, parse_state
from varprod.fuzz import draw_trial, run_fuzz
from varprod.sweeps import SweepSpec, format_cell, sweep_rows, write_sweep

PAULI = '{"kind":"pauli"}'
GELLMANN = '{"kind":"gellmann"}'


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def dense(m):
    m = np.asarray(m, dtype=complex)
    return {"kind": "dense", "dim": m.shape[0], "entries": [[z.real, z.imag] for z in m.ravel()]}


def test_parse_state_kinds():
    rho, parsed = parse_state(dense(np.eye(3) / 3))
    assert rho.dim == 3 and parsed.bloch is None
    rho, parsed = parse_state({"kind": "bloch_qubit", "r": [0, 0, 1]})
    assert np.allclose(rho.mat, np.diag([1, 0]))
    rho, parsed = parse_state({"kind": "bloch_qutrit", "r": [0] * 8})
    assert np.allclose(rho.mat, np.eye(3) / 3)
    rho, parsed = parse_state({"kind": "bloch_qutrit_param", "a": 0.5, "alpha": 0.3, "beta": 0.8})
    assert parsed.qutrit_params == (0.5, 0.3, 0.8)


@pytest.mark.parametrize(
    "desc",
    [{"r": [0, 0, 0]}, {"kind": "bloch_qubit", "r": [0, 0]}, {"kind": "dense", "dim": 2, "entries": [[1, 0]]}, {"kind": "mystery"}],
)
def test_malformed_state_descriptors(desc):
    with pytest.raises(DescriptorError):
        parse_state(desc)


def test_parse_observables():
    assert len(parse_observables({"kind": "pauli"})) == 3
    assert len(parse_observables([{"kind": "gellmann"}])) == 8
    obs = parse_observables([{**dense(np.diag([1, -1])), "label": "Z"}, {"kind": "pauli"}])
    assert [o.label for o in obs] == ["Z", "sx", "sy", "sz"]


def test_cmd_bound_maximally_mixed_pauli(capsys):
    code, out, _ = run(capsys, "bound", "--state", '{"kind":"bloch_qubit","r":[0,0,0]}', "--obs", PAULI, "--bound", "theorem1")
    assert code == 0
    (rec,) = json.loads(out)
    assert rec["product"] == 1 and rec["bound_value"] == 0


def test_cmd_bound_oracle_agreement(capsys):
    state = json.dumps({"kind": "bloch_qubit", "r": [1 / 3, 2 / 3, 0]})
    code, out, _ = run(capsys, "bound", "--state", state, "--obs", PAULI, "--bound", "theorem1", "--bound", "theorem2_det")
    recs = json.loads(out)
    assert [r["bound_value"] for r in recs] == pytest.approx([8 / 27, 8 / 27], abs=1e-15)
    assert len({r["product"] for r in recs}) == 1


def test_cmd_bound_gellmann(capsys, tmp_path):
    state = tmp_path / "state.json"
    state.write_text(json.dumps(dense(np.eye(3) / 3)))
    out_path = tmp_path / "out.csv"
    code, _, _ = run(capsys, "bound", "--state", str(state), "--obs", GELLMANN, "--format", "csv", "--out", str(out_path))
    assert code == 0
    rows = list(csv.DictReader(out_path.open()))
    assert {r["bound"] for r in rows} >= {"theorem2_det", "theorem2_cycles"}
    assert len({r["product"] for r in rows}) == 1
    assert float(rows[0]["product"]) == pytest.approx((2 / 3) ** 8, rel=1e-14)
    assert float(rows[0]["product"]) == pytest.approx(0.039018, abs=5e-7)


def test_cmd_bound_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "bound", "--state", '{"kind":"bloch_qubit","r":[0,0,2]}', "--obs", PAULI)
    assert code == 2 and "Bloch" in err
    code, _, _ = run(capsys, "bound", "--state", str(tmp_path / "missing.json"), "--obs", PAULI)
    assert code == 1
    code, _, _ = run(capsys, "bound", "--state", "{not json", "--obs", PAULI)
    assert code == 1
    code, _, _ = run(capsys, "bound", "--state", '{"kind":"bloch_qubit","r":[0,0,0]}', "--obs", GELLMANN)
    assert code == 2
    code, _, _ = run(capsys, "bound", "--state", '{"kind":"bloch_qubit","r":[0,0,0]}', "--obs", "[" + PAULI + "]", "--bound", "gellmann_closed_form")
    assert code == 2


def test_cmd_compare(capsys):
    state = json.dumps({"kind": "bloch_qubit", "r": [1 / 3, 2 / 3, 0]})
    code, out, _ = run(capsys, "compare", "--state", state, "--obs", PAULI)
    assert code == 0
    data = json.loads(out)
    assert all(data["orderings"].values())
    assert data["product"] == pytest.approx(40 / 81)


@pytest.mark.parametrize(
    "desc,valid",
    [
        ({"kind": "bloch_qubit", "r": [0, 0, 1.5]}, False),
        (dense(np.eye(3) / 3), True),
        ({"kind": "bloch_qutrit_param", "a": 1, "alpha": math.pi / 2, "beta": math.pi / 4}, False),
        ({"kind": "bloch_qutrit_param", "a": 0.5, "alpha": 0.1, "beta": 0.3}, True),
    ],
)
def test_cmd_validate(capsys, desc, valid):
    code, out, _ = run(capsys, "validate", "--state", json.dumps(desc))
    report = json.loads(out)
    assert report["valid"] is valid
    assert code == (0 if valid else 2)
    assert len(report["eigenvalues"]) == report["dim"]
    if desc["kind"] == "bloch_qubit":
        assert report["bloch_norm"] == 1.5
    if desc["kind"] == "bloch_qutrit_param":
        assert report["norm_condition"] is True
        assert report["eigenvalue_condition"] is valid
        assert report["conditions_agree"] is valid


def test_validate_eigenvalues_of_explicit_qutrit(capsys):
    desc = {"kind": "bloch_qutrit_param", "a": 1, "alpha": math.pi / 2, "beta": math.pi / 4}
    _, out, _ = run(capsys, "validate", "--state", json.dumps(desc))
    # off-diagonal 1/sqrt(6) on (1,3) and (2,3): eigenvalues 1/3 and 1/3 +- 1/sqrt(3)
    expected = sorted([1 / 3 - 1 / math.sqrt(3), 1 / 3, 1 / 3 + 1 / math.sqrt(3)])
    assert json.loads(out)["eigenvalues"] == pytest.approx(expected, abs=1e-12)


def test_csv_cells_have_enough_digits():
    for x in (0.0, 1.0, 2 / 3, -1e-300, 123456.789):
        cell = format_cell(x)
        mantissa = re.match(r"-?(\d)\.(\d+)e", cell)
        assert mantissa and len(mantissa.group(1) + mantissa.group(2)) >= 12
        assert float(cell) == pytest.approx(x, rel=1e-15)
    assert format_cell(None) == ""
    assert format_cell(True) == "true"


def test_sweep_fig1_first_row(tmp_path):
    rows = write_sweep(SweepSpec("fig1", 360), tmp_path / "fig1.csv")
    first = rows[0]
    assert first["product"] == pytest.approx(40 / 81, abs=1e-14)
    assert first["L7"] == pytest.approx(8 / 27, abs=1e-14)
    assert first["L10"] == 0
    header = (tmp_path / "fig1.csv").read_text().splitlines()[0]
    assert header == "theta,product,L7,L10,L11"


def test_sweep_fig2_flags_invalid_states():
    rows = sweep_rows(SweepSpec("fig2", 12, {"a2": 1 / 3}))
    assert len(rows) == 144
    invalid = [r for r in rows if not r["valid"]]
    assert invalid and all(r["bound_scaled"] is None for r in invalid)


def test_sweep_cli_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["sweep", "--figure", "fig3", "--steps", "40", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "alpha,valid,product_scaled,bound_scaled,printed_bound_scaled,printed_bound_sin2beta_scaled"
    assert len(lines) == 41


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec("fig4")
    with pytest.raises(ValueError):
        SweepSpec("fig1", 1)


def test_fuzz_is_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code = cli.main(["fuzz", "--trials", "30", "--dims", "2-3", "--n-obs", "2-4", "--seed", "99", "--out", str(p)])
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    summary = json.loads(paths[0].read_text())
    assert summary["pass"] and summary["total_trials"] == 30 * 2 * 3
    assert summary["checks"]["cycles_vs_det"]["evaluated"] == 180
    assert summary["checks"]["theorem1_vs_det"]["evaluated"] == 60


def test_fuzz_replay_matches_summary():
    summary = run_fuzz(5, 20, [3], [3])
    where = summary["worst_gap"]
    trial = draw_trial(where["seed"], where["index"], where["dim"], where["n"])
    from varprod.bounds import gram_det_bound

    assert trial.table.product - gram_det_bound(trial.table) == where["gap"]


def test_fuzz_failure_exit_code(capsys, monkeypatch):
    import varprod.fuzz as fz

    monkeypatch.setitem(fz.CHECK_TOLERANCES, "sum_amgm", -1.0)
    code, out, _ = run(capsys, "fuzz", "--trials", "3", "--seed", "1")
    assert code == 3
    assert json.loads(out)["checks"]["sum_amgm"]["pass"] is False


def test_run_config_validation(capsys):
    assert cli.main(["fuzz", "--trials", "0"]) == 2
    assert cli.main(["fuzz", "--dims", "1"]) == 2
