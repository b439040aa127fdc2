import json
import subprocess
import sys
from pathlib import Path

import pytest

from loopmult.cli import main
from loopmult.config import Caps, ConfigError, parse_config
from loopmult.mult import CAP_STATE

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def write(tmp_path, text, name="run.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_caps_defaults_and_validation():
    c = Caps()
    assert (c.max_dim, c.max_degree, c.ansatz_degree, c.seed) == (64, 24, 3, 0)
    with pytest.raises(ConfigError, match="caps.max_dim"):
        Caps(max_dim=0)
    with pytest.raises(ConfigError, match="caps.samples"):
        Caps(samples="many")


def test_parse_config_errors_name_the_field():
    with pytest.raises(ConfigError, match=r"\[loop\]"):
        parse_config("loop verify", {"caps": {}})
    with pytest.raises(ConfigError, match="points"):
        parse_config("loop verify", {"loop": {"family": "LF", "f": "y^2"}, "points": {}})
    with pytest.raises(ConfigError, match="caps.bogus"):
        parse_config("loop verify", {"loop": {"family": "LF", "f": "y^2"}, "caps": {"bogus": 1}})
    with pytest.raises(ConfigError, match="command"):
        parse_config("loop verify", {"command": "mult identify", "loop": {}})


def test_overrides_apply():
    cfg = parse_config("mult identify", {"loop": {"family": "LV", "v": "x^2"}, "caps": {"max_dim": 9}},
                       {"max_dim": None, "seed": 4})
    assert cfg.caps.max_dim == 9 and cfg.caps.seed == 4


def test_mult_identify_lv(capsys):
    code, out, err = run_cli(["mult", "identify", "--config", str(CONFIGS / "mult_lv_x2.toml")], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["schema_version"] == "1" and report["status"] == "pass"
    assert report["result"]["mult"]["dim"] == 5
    assert report["result"]["mult"]["verdict"] == "consistent with f_4 ⊕ R"
    assert report["config"]["loop"] == {"family": "LV", "v": "x^2"}
    assert "mult identify: pass" in err


def test_loop_verify_lf(capsys):
    code, out, _ = run_cli(["loop", "verify", "--config", str(CONFIGS / "verify_lf_y2.toml")], capsys)
    assert code == 0 and json.loads(out)["result"]["axioms"]["ok"]


def test_empty_config_is_usage_error(tmp_path, capsys):
    code, out, err = run_cli(["loop", "verify", "--config", write(tmp_path, "")], capsys)
    assert code == 2 and out == "" and "empty" in err


@pytest.mark.parametrize("text, needle", [
    ("[loop]\nfamily = 'LV'\nv = 'x^^2'\n", "polynomial"),
    ("[loop]\nfamily = 'LQ'\n", "LQ"),
    ("[loop\n", "TOML"),
    ("[loop]\nfamily = 'LV'\nv = 'x^2'\n[caps]\nmax_dim = -1\n", "caps.max_dim"),
])
def test_bad_configs(tmp_path, capsys, text, needle):
    code, _, err = run_cli(["mult", "identify", "--config", write(tmp_path, text)], capsys)
    assert code == 2 and needle in err


def test_missing_config_file(capsys):
    code, _, err = run_cli(["loop", "verify", "--config", "/nonexistent/run.toml"], capsys)
    assert code == 2 and "cannot read" in err


def test_cap_state_exit_code(capsys):
    code, out, _ = run_cli(["mult", "identify", "--config", str(CONFIGS / "mult_lv_x2.toml"), "--max-dim", "3"],
                           capsys)
    report = json.loads(out)
    assert code == 1 and report["status"] == "fail" and report["result"]["state"] == CAP_STATE


def test_improper_loop_exit_code(tmp_path, capsys):
    code, out, _ = run_cli(["mult", "identify", "--config", write(tmp_path, "[loop]\nfamily='LV'\nv='2*x'\n")],
                           capsys)
    assert code == 1 and json.loads(out)["result"]["state"] == "improper"


@pytest.mark.parametrize("cmd, cfg, expect", [
    ("group mul", "group_amalg.toml", 0),
    ("loop eval", "eval_lvn.toml", 0),
    ("section check", "section_lv_swapped.toml", 0),
    ("span dim", "span_x3y.toml", 0),
    ("kepka check", "kepka_filiform_check.toml", 0),
    ("kepka solve", "kepka_filiform_solve.toml", 0),
    ("kepka solve", "kepka_g5_unknown.toml", 1),
    ("kepka solve", "kepka_filiform_n1_unknown.toml", 1),
    ("section check", "section_lg5_negative.toml", 1),
    ("mult identify", "mult_lv_x2_z2.toml", 0),
])
def test_example_configs(capsys, tmp_path, cmd, cfg, expect):
    out = tmp_path / "r.json"
    code, stdout, _ = run_cli(cmd.split() + ["--config", str(CONFIGS / cfg), "--out", str(out)], capsys)
    assert code == expect and stdout == ""
    report = json.loads(out.read_text())
    assert report["command"] == cmd and report["status"] == ("pass" if expect == 0 else "fail")


def test_result_values(capsys):
    _, out, _ = run_cli(["span", "dim", "--config", str(CONFIGS / "span_x3y.toml")], capsys)
    assert json.loads(out)["result"]["translate_span_dim"] == 8  # x^3y+y^2, x^2y, x^3+2y, xy, x^2, y, x, 1
    _, out, _ = run_cli(["group", "mul", "--config", str(CONFIGS / "group_amalg.toml")], capsys)
    assert json.loads(out)["result"]["matrix_oracle"] is True
    _, out, _ = run_cli(["kepka", "solve", "--config", str(CONFIGS / "kepka_g5_unknown.toml")], capsys)
    sol = json.loads(out)["result"]["solution"]
    assert sol["forced_loop_form"] == {"v": "x*c1"}


def test_reports_are_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        target = tmp_path / f"r{i}.json"
        subprocess.run([sys.executable, "-m", "loopmult", "mult", "identify", "--config",
                        str(CONFIGS / "mult_lv_x2_z2.toml"), "--out", str(target)], check=True,
                       capture_output=True)
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_usage_error_from_argparse(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["mult", "identify"])
    assert exc.value.code == 2
