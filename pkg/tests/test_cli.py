import ast
import subprocess
import sys

import pytest

from ncrelax.cli import main
from ncrelax.sdpa import read_sdpa


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, text, name="p.ncp"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_generate_toy(tmp_path, toy_file, capsys):
    out_path = tmp_path / "toy.dat-s"
    code, out, _ = run(capsys, "generate", toy_file, "-o", out_path)
    assert code == 0
    assert "variables: 13" in out and "blocks: 6 3" in out
    lines = out_path.read_text().splitlines()
    assert lines[:3] == ["13", "2", "6 3"]
    with open(out_path) as fh:
        assert read_sdpa(fh).nvars == 13


def test_generate_order_too_low(tmp_path, capsys):
    path = write(tmp_path, "vars x hermitian\nobjective x^4\norder 1\n")
    code, out, err = run(capsys, "generate", path, "-o", tmp_path / "o.dat-s")
    assert code == 2 and "too low" in err and out == ""


def test_generate_unreadable(tmp_path, capsys):
    code, _, err = run(capsys, "generate", tmp_path / "missing.ncp", "-o", tmp_path / "o.dat-s")
    assert code == 1 and err


def test_generate_parse_error(tmp_path, capsys):
    code, _, err = run(capsys, "generate", write(tmp_path, "objective y\norder 1\n"))
    assert code == 1 and "undeclared" in err


def test_solve_toy(toy_file, capsys):
    code, out, err = run(capsys, "solve", toy_file)
    assert code == 0
    primal, dual = ast.literal_eval(out.strip())
    assert abs(primal + 0.75) <= 1e-4 and abs(dual + 0.75) <= 1e-4
    assert "optimal" in err


def test_solve_infeasible(tmp_path, capsys):
    path = write(tmp_path, "vars x1 hermitian\nobjective x1\nineq x1 - 1\nineq -x1\norder 1\n")
    code, _, err = run(capsys, "solve", path)
    assert code == 3 and "infeasible_suspected" in err


def test_solve_constant_objective(tmp_path, capsys):
    path = write(tmp_path, "objective 5\norder 1\n")
    code, out, _ = run(capsys, "solve", path)
    assert code == 0
    primal, dual = ast.literal_eval(out.strip())
    assert primal == pytest.approx(5.0, abs=1e-8) and dual == pytest.approx(5.0, abs=1e-8)


def test_solve_sdpa_file(tmp_path, toy_file, capsys):
    out_path = tmp_path / "toy.dat-s"
    run(capsys, "generate", toy_file, "-o", out_path)
    code, out, _ = run(capsys, "solve", out_path)
    assert code == 0 and abs(ast.literal_eval(out.strip())[0] + 0.75) <= 1e-4


def test_info(toy_file, capsys):
    code, out, _ = run(capsys, "info", toy_file)
    assert code == 0
    assert "basis: 1 x1 x2 x1*x2 x2*x1 x2^2" in out
    assert "moments: 13" in out


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "-n", 2, 3, "--mode", "eqs")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()]
    assert rows[0] == ["n", "blocks", "variables", "milliseconds"]
    assert [int(r[1]) for r in rows[1:]] == [6, 12]


def test_bench_all_subs(capsys):
    code, out, _ = run(capsys, "bench", "-n", 4, "--all-subs")
    assert code == 0 and out.splitlines()[1].split(",")[1] == "0"


def test_bench_rejects_small_n(capsys):
    assert run(capsys, "bench", "-n", 1)[0] == 1


def test_max_passes_env(tmp_path, capsys, monkeypatch):
    path = write(tmp_path, "vars a b hermitian\nobjective a*b + b*a\nsub a*b -> b*a\nsub b*a -> a*b\norder 1\n")
    monkeypatch.setenv("NCRELAX_MAX_PASSES", "5")
    code, _, err = run(capsys, "generate", path, "-o", tmp_path / "o.dat-s")
    assert code == 2 and "5 substitutions" in err


def test_module_entry_point(toy_file):
    res = subprocess.run([sys.executable, "-m", "ncrelax", "info", str(toy_file)],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "blocks: 6 3" in res.stdout
