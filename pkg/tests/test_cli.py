import json
import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner
from main import cli
from app.services.example_service import get_example
from app.utils.spec_io import dump_spec_json


@pytest.fixture
def runner():
    return CliRunner()


@pytest.mark.parametrize("key,code", [
    ("schrodinger", 0),
    ("eb-illposed", 3),
    ("roller-beam", 0),
    ("eb-generic", 0),
])
def test_analyze_exit_codes(runner, key, code):
    result = runner.invoke(cli, ["analyze", "--example", key])
    assert result.exit_code == code, result.output


def test_analyze_json_report(runner):
    result = runner.invoke(cli, ["analyze", "--example", "eb-illposed", "--json", "-"])
    payload = json.loads(result.stdout)
    assert payload["verdict"] == "NotWellPosed"
    assert payload["ratio"] < 1e-12
    assert len(payload["B1"]) == 4 and len(payload["B1"][0][0]) == 2


def test_analyze_json_written_to_file(runner, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(cli, ["analyze", "--example", "roller-beam", "--json", str(out)])
    assert result.exit_code == 0, result.output
    assert "(sufficient)" in result.stdout
    assert json.loads(out.read_text())["verdict"] == "WellPosedSufficient"


def test_example_piped_into_validate(runner):
    shown = runner.invoke(cli, ["examples", "show", "roller-beam", "--param", "EI=2.5"])
    assert shown.exit_code == 0
    result = runner.invoke(cli, ["validate", "-"], input=shown.stdout)
    assert result.exit_code == 0, result.output
    assert "roller-beam" in result.stdout


def test_examples_list(runner):
    result = runner.invoke(cli, ["examples", "list"])
    for key in ("schrodinger", "eb-illposed", "roller-beam", "eb-generic", "scalar-channel"):
        assert key in result.stdout


def test_non_passive_spec_fails_validation(runner, tmp_path):
    spec = get_example("schrodinger")
    path = tmp_path / "flipped.json"
    path.write_text(dump_spec_json(spec.with_updates(WC=-spec.WC)))
    assert runner.invoke(cli, ["validate", str(path)]).exit_code == 1
    assert runner.invoke(cli, ["analyze", str(path)]).exit_code == 1


def test_parse_and_dimension_errors(runner, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"name": "x", "n": 1,')
    assert runner.invoke(cli, ["validate", str(broken)]).exit_code == 2

    spec = json.loads(dump_spec_json(get_example("eb-generic")))
    spec["WC"] = spec["WC"][:3]
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps(spec))
    result = runner.invoke(cli, ["validate", str(wrong)])
    assert result.exit_code == 2
    assert "WC" in result.output


def test_unknown_example_and_param(runner):
    assert runner.invoke(cli, ["analyze", "--example", "nope"]).exit_code == 2
    assert runner.invoke(cli, ["analyze", "--example", "schrodinger", "--param", "rho=2"]).exit_code == 2


def test_transfer_writes_csv(runner, tmp_path):
    out = tmp_path / "scan.csv"
    summary = tmp_path / "scan.json"
    result = runner.invoke(cli, ["--threads", "1", "transfer", "--example", "schrodinger", "--r", "1",
                                 "--omega-max", "100", "--samples", "32", "--levels", "2",
                                 "--oracle-every", "10", "--csv", str(out), "--json", str(summary)])
    assert result.exit_code == 0, result.output
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["omega", "re_s", "im_s", "g_norm", "cond_loop", "oracle_residual"]
    assert frame["oracle_residual"].dropna().max() <= 1e-7
    assert json.loads(summary.read_text())["scans"][0]["r"] == 1.0


def test_oracle_compare(runner):
    result = runner.invoke(cli, ["oracle-compare", "--example", "eb-generic", "--s", "2+3j", "--s", "10-40j"])
    assert result.exit_code == 0, result.output


def test_simulate(runner, tmp_path):
    out = tmp_path / "traj.csv"
    result = runner.invoke(cli, ["simulate", "--example", "roller-beam", "--t-end", "0.01", "--nx", "41",
                                 "--x0", "random", "--input", "sine:1:5", "--csv", str(out)])
    assert result.exit_code == 0, result.output
    frame = pd.read_csv(out)
    assert len(frame) == 11
    assert list(frame.columns[:3]) == ["t", "H", "re_power"]
    assert frame["t"].iloc[0] == 0.0 and np.isnan(frame["re_power"].iloc[0])
    assert {"u1_re", "y1_re"} <= set(frame.columns)


def test_simulate_closure_singular(runner, tmp_path):
    spec = get_example("schrodinger").with_updates(WB1=[[0, 1, 0, 0], [0, 2, 0, 0]])
    path = tmp_path / "singular.json"
    path.write_text(dump_spec_json(spec))
    assert runner.invoke(cli, ["simulate", str(path), "--t-end", "0.01"]).exit_code == 5


def test_global_tolerance_option(runner, tmp_path):
    spec = get_example("schrodinger").with_updates(P2=[[1e-9 + 1j]])
    path = tmp_path / "perturbed.json"
    path.write_text(dump_spec_json(spec))
    assert runner.invoke(cli, ["validate", str(path)]).exit_code == 1
    assert runner.invoke(cli, ["--tol", "1e-6", "validate", str(path)]).exit_code == 0


def test_simulate_rejects_bad_dimensions(runner, tmp_path):
    spec = json.loads(dump_spec_json(get_example("eb-generic")))
    spec["WC"] = spec["WC"][:3]
    path = tmp_path / "short.json"
    path.write_text(json.dumps(spec))
    result = runner.invoke(cli, ["simulate", str(path), "--t-end", "0.01", "--nx", "21"])
    assert result.exit_code == 2, result.output


def test_simulate_rejects_non_passive(runner, tmp_path):
    spec = get_example("schrodinger")
    path = tmp_path / "flipped.json"
    path.write_text(dump_spec_json(spec.with_updates(WC=-spec.WC)))
    result = runner.invoke(cli, ["simulate", str(path), "--t-end", "0.01", "--nx", "21"])
    assert result.exit_code == 1, result.output


def test_transfer_reports_ill_posed_growth(runner):
    result = runner.invoke(cli, ["transfer", "--example", "eb-illposed", "--omega-max", "1e4", "--samples", "256"])
    assert result.exit_code == 0, result.output
    lines = [line for line in result.stdout.splitlines() if line.startswith("r = ")]
    assert [line.split(":")[0] for line in lines] == ["r = 1", "r = 10", "r = 100"]
    assert all("GrowingUnbounded" in line for line in lines)
