import json
import math
from pathlib import Path

import numpy as np
import pytest

from hcg import cli
from hcg.config import ConfigError, validate_config

GOLDEN = Path(__file__).parent / "golden"
GOLDEN_COMMANDS = {
    "vsi_walker_log": "vsi",
    "classify_pow": "classify",
    "analyze_warped": "analyze",
    "singer_sym": "singer",
}

BASE = "metric.name = walker.log\npoints.list = 0, 1, 0; 0.5, 2, 1\n"


def _write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


@pytest.mark.parametrize("name", sorted(GOLDEN_COMMANDS))
def test_golden_reports(tmp_path, name):
    out = tmp_path / "out.json"
    code = cli.main([GOLDEN_COMMANDS[name], "--config", str(GOLDEN / f"{name}.cfg"), "--out", str(out)])
    assert code == 0
    assert out.read_text() == (GOLDEN / f"{name}.json").read_text()


def test_reports_are_deterministic(tmp_path):
    cfg = _write(tmp_path, BASE + "k = 1\n")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["analyze", "--config", str(cfg), "--out", str(a)]) == 0
    assert cli.main(["analyze", "--config", str(cfg), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert cli.serialize(report) == a.read_text()
    assert report["timing"] is None


def test_timing_is_opt_in(tmp_path):
    cfg = _write(tmp_path, BASE + "report.timing = true\n")
    out = tmp_path / "t.json"
    cli.main(["vsi", "--config", str(cfg), "--out", str(out)])
    assert json.loads(out.read_text())["timing"]["seconds"] > 0


def test_stdout_report(tmp_path, capsys):
    cfg = _write(tmp_path, BASE + "expect = VSI\n")
    assert cli.main(["vsi", "--config", str(cfg)]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["verdict"]["value"] == "VSI"
    assert captured.err.startswith("PASS vsi walker.log")


def test_verdict_mismatch_exit_code(tmp_path, capsys):
    cfg = _write(tmp_path, BASE + "expect = not-VSI\n")
    assert cli.main(["vsi", "--config", str(cfg), "--out", str(tmp_path / "o.json")]) == 1
    assert capsys.readouterr().out.startswith("FAIL")


@pytest.mark.parametrize(
    "extra,fragment",
    [
        ("k = 3\n", "level cap 2"),
        ("k = two\n", "k must be an integer"),
        ("foo = 1\n", "unknown key"),
        ("metric.b = 1\n", "unknown parameter 'b'"),
        ("tol = -1\n", "tol must be positive"),
        ("match.starts = 0\n", "at least 1"),
        ("report.timing = maybe\n", "true or false"),
        ("command = match\n", "config declares command"),
        ("points.grid.x = 0:1:2\n", "either points.list or points.grid"),
    ],
)
def test_config_errors_exit_2(tmp_path, capsys, extra, fragment):
    cfg = _write(tmp_path, BASE + extra)
    assert cli.main(["vsi", "--config", str(cfg)]) == 2
    assert fragment in capsys.readouterr().err


def test_cli_overrides(tmp_path, capsys):
    cfg = _write(tmp_path, BASE)
    assert cli.main(["vsi", "--config", str(cfg), "--k", "3"]) == 2
    assert "level cap" in capsys.readouterr().err
    assert cli.main(["vsi", "--config", str(cfg), "--tol", "0"]) == 2
    out = tmp_path / "o.json"
    assert cli.main(["analyze", "--config", str(cfg), "--k", "0", "--tol", "1e-6", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["config"]["k"] == 0 and report["config"]["tol"] == 1e-6
    assert cli.main(["vsi", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_validate_reports_locations():
    with pytest.raises(ConfigError) as info:
        validate_config("metric.name = walker.log\nmetric.name = walker.exp\n", "vsi")
    assert info.value.line == 2 and "duplicate" in str(info.value)
    with pytest.raises(ConfigError) as info:
        validate_config("metric.name = walker.nope\npoints.list = 0,1,0\n", "vsi")
    assert "available: " in str(info.value) and "walker.exp" in str(info.value)
    with pytest.raises(ConfigError) as info:
        validate_config("metric.name = walker.log\npoints.list = 0,-1,0\n", "vsi")
    assert "outside the domain" in str(info.value)
    with pytest.raises(ConfigError, match="two points"):
        validate_config("metric.name = walker.log\npoints.list = 0,1,0\n", "match")
    with pytest.raises(ConfigError, match="slice.levels"):
        validate_config("metric.name = warped.sphere\npoints.list = 0,0,0\n", "slice")
    with pytest.raises(ConfigError, match="missing coordinate"):
        validate_config("metric.name = walker.log\npoints.grid.x = 0:1:2\npoints.grid.y = 1:2:2\n", "vsi")
    with pytest.raises(ConfigError, match="3 coordinates"):
        validate_config("metric.name = walker.log\npoints.list = 0,1\n", "vsi")
    with pytest.raises(ConfigError, match="no command"):
        validate_config(BASE)
    with pytest.raises(ConfigError, match="key = value"):
        validate_config("metric.name walker.log\n", "vsi")


def test_grid_points_and_defaults():
    cfg = validate_config(
        "# comment line\nmetric.name = walker.pow  # trailing comment\nmetric.eps = -1\n"
        "points.grid.x = 0:1:2\npoints.grid.y = 0.5:1.5:3\npoints.grid.xt = 0:0:1\n",
        "vsi",
    )
    assert len(cfg.points) == 6
    assert cfg.params == {"eps": -1.0}
    assert cfg.tol == 1e-10 and cfg.k == 2 and cfg.starts == 64
    assert cfg.echo()["points"][0] == [0.0, 0.5, 0.0]


def test_clean_rounding():
    assert cli._clean(1 / 3) == 0.333333333333
    assert cli._clean(float("nan")) is None
    assert cli._clean(-0.0) == 0.0
    assert cli._clean(np.array([1.0, math.inf])) == [1.0, None]
    assert cli._clean({"a": (np.int64(2), np.bool_(True))}) == {"a": [2, True]}


def test_classify_branches(tmp_path):
    cases = [
        ("walker.exp", "", "exponential"),
        ("walker.log", "", "logarithmic"),
        ("walker.quad", "metric.alpha = inverse_square\n", "alpha-power-law"),
        ("walker.quad", "metric.alpha = exp\n", "alpha-other"),
        ("walker.quartic", "", "power"),
    ]
    for name, extra, verdict in cases:
        cfg = validate_config(f"metric.name = {name}\n{extra}points.list = 1, 0.5, 0; 2, 1.5, 0\n", "classify")
        report, code = cli.run(cfg)
        assert report["verdict"]["value"] == verdict, name
    with pytest.raises(ConfigError):
        cli.run(validate_config("metric.name = warped.flat\npoints.list = 0,0,0\n", "classify"))


def test_singer_profile_verdicts():
    # f = y^4 / 12 is a power profile away from y = 0, where R and nabla R vanish
    cfg = validate_config("metric.name = walker.quartic\npoints.list = 0, 1, 0; 0, 2, 0\n", "singer")
    assert cli.run(cfg)[0]["verdict"]["value"] == "constant-profile"
    cfg = validate_config("metric.name = walker.quartic\npoints.list = 0, 0, 0; 0, 1, 0\n", "singer")
    report, _ = cli.run(cfg)
    assert report["verdict"]["value"] == "varying-profile"
    assert [r["dims"] for r in report["results"]] == [[4, 4, 1], [2, 0, 0]]
