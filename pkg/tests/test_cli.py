import json
import subprocess
import sys

import pytest

from apa.cli import main
from apa.game_model import parse_pgsolver
from apa.templates import Assumption

import suite

SEVEN = str(suite.GAMES_DIR / "seven.gm")
TRAP = str(suite.GAMES_DIR / "trap.gm")
TRIANGLE = str(suite.GAMES_DIR / "triangle.gm")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_text_and_json(capsys):
    code, out, _ = run(capsys, "solve", SEVEN)
    assert code == 0
    assert out.splitlines()[0] == "region: v1 v2 v3 v4 v5 v6"
    code, out, _ = run(capsys, "solve", SEVEN, "--format", "json")
    data = json.loads(out)
    assert data["region"] == [0, 1, 2, 3, 4, 5]
    assert set(data["iterations"]) == {"standard", "accelerated", "linear"}


def test_assume_text(capsys):
    code, out, _ = run(capsys, "assume", SEVEN)
    assert code == 0
    assert out.splitlines() == [
        "region: v1 v2 v3 v4 v5 v6",
        "unsafe: (v6,v7)",
        "colive: (v5,v5) (v6,v5)",
        "live: if {v1} then [{(v1,v2)}]",
        "live: if {v3} then [{(v2,v4)}, {(v1,v2)}]",
    ]


def test_assume_json_is_the_assumption_schema(capsys):
    code, out, _ = run(capsys, "assume", SEVEN, "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"unsafe", "colive", "cond_live"}
    assert data["unsafe"] == [[5, 6]]
    assert data["cond_live"][0] == {"condition": [0], "groups": [[[0, 1]]]}
    assert Assumption.from_json(data).to_json() == data


def test_assume_ltl_and_render(capsys):
    code, out, _ = run(capsys, "assume", TRAP, "--objective", "safety", "--target", "p", "--format", "ltl")
    assert (code, out.strip()) == (0, "G !(p & X q)")
    code, out, _ = run(capsys, "render-ltl", TRAP, "--objective", "safety", "--target", "p")
    assert (code, out.strip()) == (0, "G !(p & X q)")


def test_empty_safety_target(capsys):
    code, out, _ = run(capsys, "assume", TRAP, "--objective", "safety", "--target", "")
    assert code == 0
    assert out.splitlines()[0] == "region:"


@pytest.mark.parametrize("objective", ["buchi", "cobuchi"])
def test_via_parity_and_cross_check(capsys, objective):
    code, native, _ = run(capsys, "assume", TRIANGLE, "--objective", objective, "--target", "p", "--format", "json")
    code2, encoded, _ = run(capsys, "assume", TRIANGLE, "--objective", objective, "--target", "p",
                            "--format", "json", "--via-parity")
    assert code == code2 == 0
    assert json.loads(native) == json.loads(encoded)
    code, _, err = run(capsys, "assume", TRIANGLE, "--objective", objective, "--target", "p", "--cross-check")
    assert code == 0 and "cross-check: PASS" in err


def test_check_passes_on_computed_assumption(capsys):
    code, out, _ = run(capsys, "check", SEVEN)
    assert code == 0
    assert out.splitlines() == ["regions: PASS", "permissive: PASS", "implementable: PASS", "sufficient: PASS"]


def test_check_reports_counterexample(capsys, tmp_path):
    G = parse_pgsolver((suite.GAMES_DIR / "triangle.gm").read_text())
    p, q, r = (G.vertex_id(x) for x in "pqr")
    path = tmp_path / "singles.json"
    path.write_text(json.dumps({"cond_live": [
        {"condition": [q], "groups": [[[q, p]]]},
        {"condition": [r], "groups": [[[r, p]]]},
    ]}))
    code, out, _ = run(capsys, "check", TRIANGLE, "--objective", "buchi", "--target", "p",
                       "--assumption-file", str(path), "--checks", "permissive,sufficient")
    assert code == 1
    lines = out.splitlines()
    assert lines[0].startswith("permissive: FAIL")
    assert lines[1] == "  counterexample: (p q r)^w"
    assert lines[2] == "sufficient: PASS"


def test_check_skips_beyond_bounds(capsys, monkeypatch):
    monkeypatch.setenv("APA_ORACLE_MAX_VERTICES", "3")
    code, out, _ = run(capsys, "check", SEVEN, "--checks", "permissive")
    assert code == 1
    assert out.strip() == "permissive: SKIP (game exceeds oracle bounds)"


def test_bad_assumption_file_is_a_parse_error(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "check", TRAP, "--objective", "safety", "--target", "p", "--assumption-file", str(path))
    assert code == 2 and "parse error" in err
    path.write_text(json.dumps({"unsafe": [[1, 0]]}))
    code, _, _ = run(capsys, "check", TRAP, "--objective", "safety", "--target", "p", "--assumption-file", str(path))
    assert code == 2


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "broken.gm"
    path.write_text("parity 0;\n0 0 0;\n")
    code, _, err = run(capsys, "solve", str(path))
    assert code == 2 and "line 2" in err


@pytest.mark.parametrize("argv", [
    ["solve", "missing.gm"],
    ["assume", TRAP, "--objective", "buchi"],
    ["assume", TRAP, "--target", "p"],
    ["assume", TRAP, "--objective", "buchi", "--target", "nowhere"],
    ["assume", TRAP, "--objective", "safety", "--target", "p", "--via-parity"],
    ["check", TRAP, "--objective", "safety", "--target", "p", "--checks", "speed"],
    ["bench"],
    ["bench", "--family", "chain", "--sizes", "0"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 64 and err


@pytest.mark.parametrize("argv", [["frobnicate"], ["solve"], ["assume", TRAP, "--variant", "fast"]])
def test_argparse_errors_exit_64(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 64


def test_bench_gen_round_trips(capsys, tmp_path):
    code, out, _ = run(capsys, "bench", "gen", "--n", "6", "--seed", "4", "--d", "3")
    assert code == 0
    G = parse_pgsolver(out)
    assert G.n == 6 and G.priority.max() <= 3
    target = tmp_path / "g.gm"
    assert main(["bench", "gen", "--n", "6", "--seed", "4", "--d", "3", "-o", str(target)]) == 0
    assert target.read_text() == out


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--family", "chain", "--sizes", "5,10", "--variants", "standard,linear")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "game,n,m,d,variant,iterations,micros"
    assert [line.split(",")[:5] for line in lines[1:]] == [
        ["chain-5", "5", "10", "2", "standard"],
        ["chain-5", "5", "10", "2", "linear"],
        ["chain-10", "10", "20", "2", "standard"],
        ["chain-10", "10", "20", "2", "linear"],
    ]


def test_bench_parallel_keeps_order(capsys):
    code, out, _ = run(capsys, "bench", SEVEN, TRAP, "--jobs", "2", "--variants", "standard")
    assert code == 0
    assert [line.split(",")[0] for line in out.splitlines()[1:]] == ["seven.gm", "trap.gm"]


def test_console_entry_points():
    for cmd in (["apa"], [sys.executable, "-m", "apa"]):
        proc = subprocess.run(cmd + ["assume", TRAP, "--objective", "cobuchi", "--target", "p"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert "unsafe: (p,q)" in proc.stdout
