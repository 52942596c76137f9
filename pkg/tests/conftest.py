from pathlib import Path

import pytest

from ncrelax import RewriteRule, generate_variables, get_relaxation

TOY_TEXT = """\
vars x1 x2 hermitian
objective x1*x2 + x2*x1
ineq -x2^2 + x2 + 0.5
sub x1^2 -> x1
order 2
"""

ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail=""):
    ACCEPTANCE_LINES.append(f"AC{number} {'PASS' if ok else 'FAIL'} {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def toy_vars():
    return generate_variables(2, hermitian=True)


@pytest.fixture
def toy_relaxation(toy_vars):
    x1, x2 = toy_vars
    rules = [RewriteRule((x1.letter(), x1.letter()), (x1.letter(),))]
    return get_relaxation(toy_vars, x1 * x2 + x2 * x1, [-x2 ** 2 + x2 + 0.5], [], rules, 2)


@pytest.fixture
def toy_file(tmp_path) -> Path:
    path = tmp_path / "toy.ncp"
    path.write_text(TOY_TEXT)
    return path
