"""Exit criteria. Run with ``pytest tests/test_acceptance.py`` or as a script."""
import random
import time

import numpy as np
import pytest

from ncrelax import (CycleSuspected, Monomial, Polynomial, RewriteRule, format_word,
                     generate_basis, generate_variables, get_relaxation, normalize,
                     validate_rules)
from ncrelax.bench import benchmark_problem, run_bench
from ncrelax.problem import parse_problem
from ncrelax.sdpa import dumps, loads, to_sdp
from ncrelax.solver import check_feasibility, solve

from conftest import TOY_TEXT, record_criterion
from oracles import count_toy_moments, operator_moments, sign_minimum
from randprob import random_relaxation

pytestmark = pytest.mark.acceptance


def _toy():
    return parse_problem(TOY_TEXT).relaxation()


def criterion_1():
    start = time.perf_counter()
    prob = parse_problem(TOY_TEXT)
    rel = prob.relaxation()
    elapsed = time.perf_counter() - start
    basis = [format_word(w, prob.names, powers=False) for w in rel.basis]
    ok = (basis == ["1", "x1", "x2", "x1*x2", "x2*x1", "x2*x2"]
          and rel.block_sizes == [6, 3] and elapsed < 1.0)
    return ok, f"basis={basis} blocks={rel.block_sizes} time={elapsed:.3f}s"


def criterion_2():
    start = time.perf_counter()
    rel = _toy()
    sol = solve(to_sdp(rel))
    elapsed = time.perf_counter() - start
    p, d = sol.primal_obj + rel.objective_shift, sol.dual_obj + rel.objective_shift
    ok = abs(p + 0.75) <= 1e-4 and abs(d + 0.75) <= 1e-4 and elapsed < 5.0
    return ok, f"primal={p!r} dual={d!r} status={sol.status} time={elapsed:.3f}s"


def criterion_3():
    start = time.perf_counter()
    bad = []
    for n in (1, 2, 3):
        for d in (0, 1, 2, 3):
            got = len(generate_basis(generate_variables(n), d))
            if got != ((2 * n) ** (d + 1) - 1) // (2 * n - 1):
                bad.append((n, d, got))
    elapsed = time.perf_counter() - start
    return not bad and elapsed < 1.0, f"mismatches={bad} time={elapsed:.3f}s"


def criterion_4():
    expected = count_toy_moments()
    got = _toy().nvars
    return got == expected == 13, f"generator={got} oracle={expected}"


def criterion_5():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst = np.inf
    for k in range(50):
        n = int(rng.integers(1, 4))
        hermitian = bool(k % 2)
        size = int(rng.integers(3, 6))
        vs = generate_variables(n, hermitian=hermitian)
        order = 2 if n * (1 if hermitian else 2) <= 4 else 1
        rel = get_relaxation(vs, Polynomial.constant(0.0), [], [], [], order)
        mats = []
        for _ in range(n):
            G = rng.standard_normal((size, size))
            mats.append((G + G.T) / 2 if hermitian else G)
        phi = rng.standard_normal(size)
        phi /= np.linalg.norm(phi)
        y = operator_moments(rel.dictionary.words_of, mats, phi)
        worst = min(worst, np.linalg.eigvalsh(rel.blocks[0].evaluate(y))[0])
    elapsed = time.perf_counter() - start
    return worst >= -1e-9 and elapsed < 10.0, f"min_eig={worst:.3e} time={elapsed:.3f}s"


def criterion_6():
    details = []
    ok = True
    for n in (2, 3, 4):
        rel = benchmark_problem(n, "subs", order=1).relaxation()
        sdp = to_sdp(rel)
        sol = solve(sdp)
        value = sol.primal_obj + rel.objective_shift
        brute = sign_minimum(n)
        rng = np.random.default_rng(n)
        mats = [np.diag(rng.choice([-1.0, 1.0], 6)) for _ in range(n)]
        phi = rng.standard_normal(6)
        phi /= np.linalg.norm(phi)
        y = operator_moments(rel.dictionary.words_of, mats, phi)
        feasible = check_feasibility(sdp, y, 1e-9).feasible
        ok &= sol.status == "optimal" and value <= brute + 1e-6 and feasible
        details.append(f"n={n}:{value:.2e}<={brute:g},feasible={feasible}")
    return ok, " ".join(details)


def criterion_7():
    bad = []
    for n in range(2, 26):
        subs, _ = run_bench(n, "subs")
        eqs, _ = run_bench(n, "eqs")
        if subs.blocks != 2 * n or eqs.blocks != n * n + n:
            bad.append((n, subs.blocks, eqs.blocks))
    start = time.perf_counter()
    run_bench(25, "subs")
    run_bench(25, "eqs")
    elapsed = time.perf_counter() - start
    return not bad and elapsed < 60.0, f"mismatches={bad} n=25 generation={elapsed:.3f}s"


def criterion_8():
    problems = [to_sdp(_toy())]
    rng = np.random.default_rng(8)
    problems += [to_sdp(random_relaxation(rng)) for _ in range(20)]
    failures = 0
    for p in problems:
        text = dumps(p)
        back = loads(text)
        if back != p or dumps(back) != text:
            failures += 1
    return failures == 0, f"problems={len(problems)} failures={failures}"


def criterion_9():
    rng = random.Random(9)
    X = generate_variables(3, hermitian=True)
    letters = [x.letter() for x in X]
    failures = 0
    for _ in range(200):
        table = {}
        for _ in range(rng.randint(1, 5)):
            lhs = tuple(rng.choice(letters) for _ in range(rng.randint(1, 3)))
            rhs = tuple(rng.choice(letters) for _ in range(rng.randint(0, len(lhs) - 1)))
            table[lhs] = RewriteRule(lhs, rhs, rng.choice([1, -1]))
        rs = validate_rules(table.values())
        for _ in range(5):
            word = tuple(rng.choice(letters) for _ in range(rng.randint(0, 8)))
            once = normalize(Monomial(1.0, word), rs)
            if normalize(once, rs) != once:
                failures += 1
    a, b = letters[:2]
    cyclic = validate_rules([RewriteRule((a, b), (b, a)), RewriteRule((b, a), (a, b))])
    try:
        normalize(Monomial(1.0, (a, b)), cyclic)
        cycle_caught = False
    except CycleSuspected:
        cycle_caught = True
    return failures == 0 and cycle_caught, f"idempotence_failures={failures} cycle_caught={cycle_caught}"


CRITERIA = {
    1: ("toy structure", criterion_1),
    2: ("toy optimum", criterion_2),
    3: ("word-count formula", criterion_3),
    4: ("variable count oracle", criterion_4),
    5: ("PSD at operator moments", criterion_5),
    6: ("benchmark lower bound", criterion_6),
    7: ("scaling counts", criterion_7),
    8: ("SDPA round trip", criterion_8),
    9: ("rewrite engine", criterion_9),
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    name, fn = CRITERIA[number]
    ok, detail = fn()
    record_criterion(number, ok, f"{name}: {detail}")
    assert ok, detail


if __name__ == "__main__":
    for number, (name, fn) in sorted(CRITERIA.items()):
        ok, detail = fn()
        print(f"AC{number} {'PASS' if ok else 'FAIL'} {name}: {detail}")
