import io
import json
import subprocess
import sys

import pytest

from conftest import DATA
from revpebble.cli import run
from revpebble.pebbling import parse_moves, validate_persistent
from revpebble.treecore import complete_binary_tree


def cli(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], io.StringIO(stdin), out, err)
    return code, out.getvalue(), err.getvalue()


def test_solve_writes_artifacts(tmp_path):
    code, out, err = cli("solve", DATA / "bt3.tree", "--out-dir", tmp_path)
    assert code == 0 and out.splitlines()[0] == "rev = 5"
    moves = parse_moves((tmp_path / "bt3.moves").read_text())
    assert validate_persistent(complete_binary_tree(3), moves).space == 5
    assert (tmp_path / "bt3.coloring").read_text().count("\n") == 6
    assert (tmp_path / "bt3.strategy").exists()


def test_solve_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cli("solve", DATA / "bt3.tree", "--out-dir", a)
    cli("solve", DATA / "bt3.tree", "--out-dir", b)
    for ext in ("coloring", "strategy", "moves"):
        assert (a / f"bt3.{ext}").read_bytes() == (b / f"bt3.{ext}").read_bytes()


def test_solve_failure_writes_nothing(tmp_path):
    code, out, err = cli("solve", DATA / "g1.dag", "--out-dir", tmp_path)
    assert code == 1 and "not a rooted tree" in err and out == ""
    assert list(tmp_path.iterdir()) == []


def test_validate(tmp_path):
    cli("solve", DATA / "bt3.tree", "--out-dir", tmp_path)
    code, out, _ = cli("validate", "--variant", "persistent", DATA / "bt3.tree", tmp_path / "bt3.moves")
    assert code == 0 and json.loads(out) == {"variant": "persistent", "space": 5, "time": 22}
    code, out, err = cli("validate", "--variant", "persistent", DATA / "bt3.tree", DATA / "bad.moves")
    assert code == 1 and "move 1" in err and out == ""
    code, _, err = cli("validate", "--variant", "visiting", DATA / "bt3.tree", tmp_path / "bt3.moves")
    assert code == 1 and "expected empty" in err


def test_erank():
    code, out, _ = cli("erank", DATA / "bt3.tree")
    assert code == 0 and out.splitlines()[0] == "erank = 4" and len(out.splitlines()) == 7


@pytest.mark.parametrize("src", ["coloring", "matchings", "strategy"])
@pytest.mark.parametrize("dst", ["coloring", "matchings", "strategy"])
def test_convert_round_trips(src, dst):
    code, out, _ = cli("convert", "--from", src, "--to", dst, DATA / "bt3.tree", DATA / f"bt3.{src}")
    assert code == 0
    want = (DATA / f"bt3.{dst}").read_text()
    # the fixture coloring lists edges in a different order than the formatter
    assert sorted(out.splitlines()) == sorted(want.splitlines())


def test_convert_rejects_bad_coloring(tmp_path):
    bad = tmp_path / "bad.coloring"
    bad.write_text("1 2 1\n1 3 1\n2 4 2\n2 5 3\n3 6 2\n3 7 3\n")
    code, _, err = cli("convert", "--from", "coloring", "--to", "matchings", DATA / "bt3.tree", bad)
    assert code == 1 and "share color" in err


def test_generate(tmp_path):
    code, out, _ = cli("generate", "bt-eps", "--h", 6, "--k", 2, "--moves", tmp_path / "m")
    rec = json.loads(out)
    assert code == 0 and rec["family"] == "bt-eps" and rec["params"] == {"h": 6, "k": 2}
    moves = parse_moves((tmp_path / "m").read_text())
    assert len(moves) + 1 == rec["time"]
    assert validate_persistent(complete_binary_tree(6), moves).space == rec["space"]
    code, out, _ = cli("generate", "separator", "--n", 500, "--shape", "random", "--k", 2, "--max-degree", 3)
    assert code == 0 and json.loads(out)["params"]["max_degree"] == 3
    code, _, err = cli("generate", "bt-eps", "--h", 4)
    assert code == 1 and "--k" in err
    code, _, _ = cli("generate", "bottom-up", "--tree", DATA / "bt3.tree")
    assert code == 0


def test_oracle(tmp_path):
    assert cli("oracle", "--which", "rev", DATA / "g1.dag")[1] == "5\n"
    assert cli("oracle", "--which", "rev", DATA / "g2.dag")[1] == "6\n"
    assert cli("oracle", "--which", "dt", DATA / "g2.dag")[1] == "6\n"
    code, out, _ = cli("oracle", "--which", "vrev", DATA / "bt3.tree", "--witness", tmp_path / "w")
    assert code == 0 and (tmp_path / "w").read_text().startswith("+")
    code, _, err = cli("oracle", "--which", "steps", "--budget", 4, DATA / "bt3.tree")
    assert code == 1 and "no persistent pebbling" in err


def test_size_cap_exit_code(tmp_path):
    big = tmp_path / "star.tree"
    big.write_text("".join(f"{i} 0\n" for i in range(1, 30)))
    code, _, err = cli("oracle", "--which", "rev", big)
    assert code == 2 and "limited to 20" in err


def test_parse_error_exit_code(tmp_path):
    cyc = tmp_path / "c.tree"
    cyc.write_text("1 2\n2 1\n")
    code, _, err = cli("solve", cyc, "--out-dir", tmp_path)
    assert code == 1 and "cycle" in err


def test_dt_interactive():
    code, out, _ = cli("dt", "--interactive", DATA / "bt3.tree", stdin="1\n3\nx\n3\n3\n")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "value = 5" and lines[-1] == "pebbles = 5"
    assert "answer 6 or 3" in lines
    code, _, err = cli("dt", "--interactive", DATA / "bt3.tree", stdin="")
    assert code == 1 and "input ended" in err
    assert cli("dt", DATA / "g1.dag")[1] == "5\n"


def test_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "revpebble", "solve", str(DATA / "bt3.tree"), "--out-dir", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("rev = 5\n")
