"""End-to-end tests of the command-line entry point."""

import json

import pytest

from xxzbethe import cli
from xxzbethe.cli import EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK, build_parser, main
from xxzbethe.records import RECORD_CSV, RECORD_JSON

CONFIG = """
[model]
n = 2
two_s = 1
r = {r}
q = 3
case = "{case}"
{boundary}
theta = 0.37
"""

CASE2 = CONFIG.format(
    r=1,
    case="Case2AlphaAlpha",
    boundary="alpha_minus = [0.31, 0.47]\nalpha_plus = [-0.22, 0.83]",
)
CASE3_EVEN = CONFIG.format(
    r=2,
    case="Case3BetaBeta",
    boundary="beta_minus = [0.41, -0.17]\nbeta_plus = [0.26, 0.35]",
)


@pytest.fixture
def config_path(tmp_path):
    """Case 2 spin-1/2 chain on two sites."""
    path = tmp_path / "case2.toml"
    path.write_text(CASE2)
    return path


def _run_dirs(root):
    return [p for p in root.iterdir() if p.is_dir()]


def _error(stderr):
    """The JSON error document is the last line written to stderr."""
    return json.loads(stderr.strip().splitlines()[-1])["error"]


def test_spectrum_writes_record(config_path, tmp_path, capsys):
    out = tmp_path / "runs"
    assert main(["spectrum", "--config", str(config_path), "--out", str(out)]) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert len(document["payload"]["reference_energies"]) == 4
    assert document["payload"]["status"] == "ok"
    assert document["meta"]["tool_version"] == "0.1.0"
    (run_dir,) = _run_dirs(out)
    assert (run_dir / RECORD_JSON).exists()
    assert (run_dir / RECORD_CSV).exists()


def test_spectrum_csv_output(config_path, tmp_path, capsys):
    assert main(["spectrum", "--config", str(config_path), "--out", str(tmp_path), "--format", "csv"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("index,E_re,E_im,deviation")


def test_rerun_overwrites_same_directory(config_path, tmp_path):
    for _ in range(2):
        assert main(["spectrum", "--config", str(config_path), "--out", str(tmp_path)]) == EXIT_OK
    assert len(_run_dirs(tmp_path)) == 1


def test_verify_commute_passes(config_path, tmp_path, capsys):
    assert main(["verify", "commute", "--config", str(config_path), "--out", str(tmp_path)]) == EXIT_OK
    checks = json.loads(capsys.readouterr().out)["payload"]["checks"]
    assert checks
    assert max(checks.values()) < 1e-9


def test_unsupported_case_exits_with_input_error(tmp_path, capsys):
    path = tmp_path / "case3.toml"
    path.write_text(CASE3_EVEN)
    assert main(["verify", "conds", "--config", str(path), "--out", str(tmp_path / "runs")]) == EXIT_INPUT
    error = _error(capsys.readouterr().err)
    assert error["type"] == "UnsupportedCase"
    assert not (tmp_path / "runs").exists()


def test_missing_config_is_input_error(tmp_path, capsys):
    assert main(["spectrum", "--out", str(tmp_path)]) == EXIT_INPUT
    assert _error(capsys.readouterr().err)["type"] == "InputError"


def test_invalid_model_is_input_error(tmp_path, capsys):
    path = tmp_path / "bad.toml"
    path.write_text(CASE2.replace("q = 3", "q = 4"))
    assert main(["spectrum", "--config", str(path), "--out", str(tmp_path)]) == EXIT_INPUT
    assert _error(capsys.readouterr().err)["type"] == "ConfigError"


def test_match_pairs_two_lists(tmp_path, capsys):
    left = tmp_path / "left.json"
    right = tmp_path / "right.json"
    left.write_text(json.dumps([1.0, [0.0, 2.0], -3.0]))
    right.write_text(json.dumps([-3.0, 1.0, {"re": 0.0, "im": 2.0}]))
    assert main(["match", str(left), str(right), "--out", str(tmp_path / "runs")]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)["payload"]
    assert payload["pairing"] == [1, 2, 0]
    assert payload["max_deviation"] == 0.0


def test_match_length_mismatch(tmp_path, capsys):
    left = tmp_path / "left.json"
    left.write_text("[1, 2]")
    right = tmp_path / "right.json"
    right.write_text("[1]")
    assert main(["match", str(left), str(right), "--out", str(tmp_path)]) == EXIT_INPUT
    assert _error(capsys.readouterr().err)["code"] == "LENGTH_MISMATCH"


def test_failed_threshold_writes_partial_record(config_path, tmp_path, capsys, monkeypatch):
    monkeypatch.setitem(cli.THRESHOLDS, "commute", -1.0)
    out = tmp_path / "runs"
    assert main(["verify", "commute", "--config", str(config_path), "--out", str(out)]) == EXIT_NUMERICAL
    captured = capsys.readouterr()
    assert _error(captured.err)["code"] == "RESIDUAL_THRESHOLD"
    assert json.loads(captured.out)["payload"]["status"] == "error"
    assert len(_run_dirs(out)) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum"],
        ["bethe", "solve"],
        ["verify", "funcrel"],
        ["match", "a.json", "b.json"],
        ["reproduce", "table1"],
        ["sweep"],
    ],
)
def test_parser_accepts_every_command(argv):
    assert build_parser().parse_args(argv).command == argv[0]
