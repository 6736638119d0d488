import json

import pytest

from omitlab import cli
from omitlab.cli import COMMANDS, main, sweep_offsets
from omitlab.config import load_config
from omitlab.errors import SingularSystem

FAST = "[noise]\nn_samples = 2000\n[sweep]\nellipse_points = 5\nz_points = 4\n"


@pytest.fixture
def fast_config(tmp_path):
    path = tmp_path / "fast.ini"
    path.write_text(FAST)
    return str(path)


@pytest.mark.parametrize("command", COMMANDS)
def test_command_runs_and_is_deterministic(command, fast_config, tmp_path):
    outs = []
    for run in ("a", "b"):
        out = tmp_path / run
        assert main([command, "--config", fast_config, "--out", str(out), "--quiet", "--points", "41"]) == 0
        files = sorted(out.iterdir())
        assert len(files) == 1
        outs.append(files[0].read_bytes())
    assert outs[0] == outs[1]
    text = outs[0].decode()
    assert "# config_sha256: " in text and "# seed: " in text


def test_json_output(fast_config, tmp_path):
    assert main(["design-check", "--config", fast_config, "--out", str(tmp_path), "--format", "json",
                 "--quiet"]) == 0
    doc = json.loads((tmp_path / "design_check.json").read_text())
    assert doc["columns"]["threshold_K"][0] == pytest.approx(6.0e-10, rel=0.02)
    assert doc["meta"]["seed"] == 12345


def test_seed_flag_changes_ellipse(fast_config, tmp_path):
    main(["ellipse", "--config", fast_config, "--out", str(tmp_path / "a"), "--quiet"])
    main(["ellipse", "--config", fast_config, "--out", str(tmp_path / "b"), "--quiet", "--seed", "7"])
    a = (tmp_path / "a" / "ellipse.csv").read_text()
    b = (tmp_path / "b" / "ellipse.csv").read_text()
    assert "# seed: 7" in b and a != b


def test_design_check_prints_threshold(capsys, tmp_path):
    assert main(["design-check", "--out", str(tmp_path)]) == 0
    assert "6e-10 K" in capsys.readouterr().out


def test_exit_code_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[sweep]\npoints = x\n")
    assert main(["response-sweep", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["response-sweep", "--config", str(tmp_path / "missing.ini")]) == 2
    assert main(["response-sweep", "--points", "1", "--out", str(tmp_path)]) == 2


def test_exit_code_precondition(tmp_path):
    cfg = tmp_path / "gas.ini"
    cfg.write_text("[gas]\nscan_max_mbar = 1\n")
    assert main(["gas-damping", "--config", str(cfg), "--out", str(tmp_path), "--quiet"]) == 4


def test_exit_code_numerical(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise SingularSystem("forced")
    monkeypatch.setattr(cli.omit, "exact_response_oracle", boom)
    assert main(["oracle-compare", "--out", str(tmp_path), "--quiet"]) == 3


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as info:
        main(["nope"])
    assert info.value.code == 2


def test_sweep_grid_honours_min_step():
    sw = load_config().sweep
    df = sweep_offsets(sw, linewidth_hz=5.0)
    steps = df[1:] - df[:-1]
    assert steps.min() >= sw.min_step_hz * (1 - 1e-9)
    assert df[0] == sw.start_hz and df[-1] == sw.stop_hz
    near = df[abs(df) <= 10]
    assert near.size > 40


def test_calibration_sets_top_power_linewidth():
    cfg = load_config()
    p, _ = cli.derive_params(cfg, power=max(cfg.control.powers))
    fwhm = (p.gamma_m + cli.omit.optical_damping(p)) / 3.141592653589793
    assert fwhm == pytest.approx(15.0, rel=1e-12)
