import json
import subprocess
import sys

import pytest

from lizardlink.assembly import default_config_text
from lizardlink.cli import main

from conftest import FIXTURES, GOLDEN

SQRT2 = str(FIXTURES / "sqrt2.json")


@pytest.fixture
def default_config(tmp_path):
    path = tmp_path / "lizard.json"
    path.write_text(default_config_text())
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_sqrt2(capsys):
    code, out, _ = run(capsys, "solve", SQRT2, "--loop", "Head", "--theta2", 90, "--theta5", 90)
    assert code == 0
    lines = out.splitlines()
    assert "theta3=45.000000" in lines
    assert "theta4=135.000000" in lines
    assert "p_couple=(1.000000, 2.000000)" in lines


def test_solve_down_branch_json(capsys):
    code, out, _ = run(capsys, "solve", SQRT2, "--loop", "Tail", "--theta2", 90, "--theta5", 90,
                       "--branch", "down", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["loop"] == "Tail" and doc["branch"] == "down"
    assert doc["theta3_deg"] == pytest.approx(-45.0, abs=1e-9)
    assert doc["joints"]["p_couple"] == pytest.approx([1.0, 0.0], abs=1e-12)


def test_solve_unreachable_exits_2(capsys):
    code, _, err = run(capsys, "solve", FIXTURES / "separated.json", "--loop", "Head",
                       "--theta2", 90, "--theta5", 90)
    assert code == 2
    assert "unreachable" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", FIXTURES / "malformed.json", "--loop", "Head", "--theta2", 90, "--theta5", 90],
        ["solve", FIXTURES / "missing.json", "--loop", "Head", "--theta2", 90, "--theta5", 90],
        ["solve", SQRT2, "--loop", "Neck", "--theta2", 90, "--theta5", 90],
        ["solve", SQRT2, "--loop", "Head", "--theta2", "nan", "--theta5", 90],
        ["solve", SQRT2, "--loop", "Head", "--theta2", 90],
        ["frobnicate"],
        [],
    ],
)
def test_config_and_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err.startswith("error:")


def test_dof_default(capsys, default_config):
    code, out, _ = run(capsys, "dof", default_config)
    assert code == 0
    assert out.splitlines()[0] == "n=13 m=16 v=4 F=4 F*=0 driving=VALID"


def test_dof_json(capsys, default_config):
    code, out, _ = run(capsys, "dof", default_config, "--json")
    doc = json.loads(out)
    assert code == 0
    assert (doc["n"], doc["m"], doc["v"], doc["F"], doc["F_star"]) == (13, 16, 4, 4, 0)
    assert doc["driving"] == ["R1", "R5", "R11", "R12"] and doc["valid"]


def test_dof_two_drivers_invalid(capsys, tmp_path):
    doc = json.loads(default_config_text())
    for joint in doc["mechanism_graph"]["joints"]:
        if joint["id"] in ("R11", "R12"):
            joint["driving"] = False
    path = tmp_path / "two.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "dof", path)
    assert code == 0
    assert out.splitlines()[0] == "n=13 m=16 v=4 F=4 F*=2 driving=INVALID"


def test_dof_fourbar(capsys):
    code, out, _ = run(capsys, "dof", FIXTURES / "fourbar.json")
    assert code == 0
    assert out.splitlines()[0].startswith("n=4 m=4 v=1 F=1 F*=0 driving=VALID")


def test_workspace_default_csv(capsys, default_config, tmp_path):
    out_path = tmp_path / "ws.csv"
    code, out, _ = run(capsys, "workspace", default_config, "--loop", "Head", "--out", out_path)
    assert code == 0
    assert out.strip() == "samples=15776 reachable=12406"
    assert len(out_path.read_text().splitlines()) == 15777


def test_workspace_golden_csv(capsys, default_config, tmp_path):
    out_path = tmp_path / "ws.csv"
    code, _, _ = run(capsys, "workspace", default_config, "--loop", "Head", "--out", out_path,
                     "--theta2-range", 45, 160, 5, "--theta5-range", 0, 135, 5, "--workers", 3)
    assert code == 0
    assert out_path.read_bytes() == (GOLDEN / "head_coarse.csv").read_bytes()


def test_workspace_single_point_svg(capsys, tmp_path):
    out_path = tmp_path / "one.svg"
    code, out, _ = run(capsys, "workspace", SQRT2, "--loop", "Head", "--out", out_path,
                       "--theta2-range", 90, 90, 1, "--theta5-range", 90, 90, 1)
    assert code == 0
    assert out.strip() == "samples=1 reachable=1"
    assert out_path.read_text().count("<line ") == 4


def test_workspace_empty_overlay_exits_2(capsys, tmp_path):
    out_path = tmp_path / "none.svg"
    code, _, err = run(capsys, "workspace", FIXTURES / "separated.json", "--loop", "Head",
                       "--out", out_path, "--theta2-range", 90, 90, 1, "--theta5-range", 90, 90, 1)
    assert code == 2
    assert "reachable" in err
    assert not out_path.exists()


def test_workspace_points_of_empty_grid_is_fine(capsys, tmp_path):
    out_path = tmp_path / "none.svg"
    code, out, _ = run(capsys, "workspace", FIXTURES / "separated.json", "--loop", "Head",
                       "--out", out_path, "--mode", "points",
                       "--theta2-range", 90, 90, 1, "--theta5-range", 90, 90, 1)
    assert code == 0 and out.strip() == "samples=1 reachable=0"


def test_workspace_unwritable_output_exits_3(capsys, tmp_path):
    code, _, err = run(capsys, "workspace", SQRT2, "--loop", "Head",
                       "--out", tmp_path / "no" / "such" / "dir.csv")
    assert code == 3
    assert "cannot write" in err


@pytest.mark.parametrize("extra", [["--out", "ws.png"], ["--out", "ws.csv", "--theta2-range", 10, 0, 1]])
def test_workspace_bad_arguments_exit_1(capsys, tmp_path, extra):
    code, _, _ = run(capsys, "workspace", SQRT2, "--loop", "Head", *extra)
    assert code == 1


def test_gait_frame_count(capsys, default_config, tmp_path):
    out_path = tmp_path / "g.jsonl"
    code, out, _ = run(capsys, "gait", default_config, "--duration", 3, "--out", out_path,
                       "--metrics", "foot_fl")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "frames=76"
    assert lines[1] == "stride_length=0.426716 path_length=1.13998 duty_estimate=0.44"
    frames = [json.loads(line) for line in out_path.read_text().splitlines()]
    assert len(frames) == 76 and frames[-1]["t"] == pytest.approx(3.0)


def test_gait_defaults_to_one_period(capsys, default_config, tmp_path):
    code, out, _ = run(capsys, "gait", default_config, "--out", tmp_path / "g.jsonl")
    assert code == 0 and out.strip() == "frames=51"


def test_gait_zero_amplitude_schedule(capsys, tmp_path):
    out_path = tmp_path / "g.jsonl"
    code, out, _ = run(capsys, "gait", SQRT2, "--schedule", FIXTURES / "zero_amplitude_schedule.json",
                       "--duration", 1, "--out", out_path, "--metrics", "foot_fl")
    assert code == 0
    assert out.splitlines() == ["frames=11", "stride_length=0 path_length=0 duty_estimate=0"]


def test_gait_oversized_amplitude_exits_2(capsys, default_config, tmp_path):
    sched = json.loads(default_config_text())["schedule"]
    for w in sched["waveforms"]:
        w["amplitude_deg"] = 60.0
    sched_path = tmp_path / "big.json"
    sched_path.write_text(json.dumps(sched))
    code, _, err = run(capsys, "gait", default_config, "--schedule", sched_path, "--out", tmp_path / "g.jsonl")
    assert code == 2
    assert "loop Head" in err


def test_gait_unknown_marker_exits_1(capsys, default_config, tmp_path):
    code, _, err = run(capsys, "gait", default_config, "--out", tmp_path / "g.jsonl", "--metrics", "nose")
    assert code == 1 and "nose" in err


def test_validate_default(capsys, default_config):
    code, out, _ = run(capsys, "validate", default_config)
    assert code == 0
    assert out.splitlines()[0] == "loops: Head, Tail, BodyLeft, BodyRight (evaluation order)"
    assert "schedule: ok" in out


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["solve", SQRT2, "--loop", "Head", "--theta2", "90", "--theta5", "90"], 0),
        (["solve", str(FIXTURES / "malformed.json"), "--loop", "Head", "--theta2", "90", "--theta5", "90"], 1),
        (["solve", str(FIXTURES / "separated.json"), "--loop", "Head", "--theta2", "90", "--theta5", "90"], 2),
        (["workspace", SQRT2, "--loop", "Head", "--out", "/nonexistent/dir/ws.csv"], 3),
    ],
)
def test_subprocess_exit_codes(argv, expected):
    proc = subprocess.run([sys.executable, "-m", "lizardlink", *argv], capture_output=True, text=True)
    assert proc.returncode == expected, proc.stderr
