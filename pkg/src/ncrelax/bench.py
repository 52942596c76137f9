"""Scaling benchmark: min sum_ij X_i X_j with X_i^2 = 1 and [X_i, X_j] = 0."""
from __future__ import annotations

import time
import warnings
from dataclasses import dataclass

from .algebra import Polynomial, generate_variables
from .problem import ProblemDef
from .rewrite import RewriteRule

__all__ = ["benchmark_problem", "BenchRow", "run_bench"]


def benchmark_problem(n: int, mode: str = "subs", order: int = 1, all_subs: bool = False) -> ProblemDef:
    """Build the benchmark over ``n`` Hermitian variables.

    ``subs`` turns commutators into substitutions and keeps ``X_i^2 = 1``
    as equalities (or as substitutions too with ``all_subs``); ``eqs``
    declares everything as equalities.
    """
    if n < 2:
        raise ValueError("the benchmark needs at least two variables")
    if mode not in ("subs", "eqs"):
        raise ValueError(f"unknown mode {mode!r}")
    X = generate_variables(n, hermitian=True)
    objective = Polynomial()
    for a in X:
        for b in X:
            objective = objective + a * b
    eqs = []
    subs = []
    if mode == "subs":
        for j in range(n):
            for i in range(j):
                subs.append(RewriteRule((X[j].letter(), X[i].letter()), (X[i].letter(), X[j].letter())))
        if all_subs:
            subs.extend(RewriteRule((x.letter(), x.letter()), ()) for x in X)
        else:
            eqs.extend(x * x - 1 for x in X)
    else:
        eqs.extend(x * x - 1 for x in X)
        for i in range(n):
            for j in range(i + 1, n):
                eqs.append(X[i] * X[j] - X[j] * X[i])
    return ProblemDef(X, objective, [], eqs, subs, order)


@dataclass
class BenchRow:
    n: int
    blocks: int
    variables: int
    milliseconds: float

    def csv(self) -> str:
        return f"{self.n},{self.blocks},{self.variables},{self.milliseconds:.3f}"


def run_bench(n: int, mode: str = "subs", order: int = 1, all_subs: bool = False):
    """Generate the benchmark relaxation; ``blocks`` counts localizing blocks."""
    problem = benchmark_problem(n, mode, order, all_subs)
    start = time.perf_counter()
    with warnings.catch_warnings():
        # commutators are anti-Hermitian; their Hermitian part vanishes
        warnings.simplefilter("ignore")
        rel = problem.relaxation()
    elapsed = (time.perf_counter() - start) * 1000.0
    return BenchRow(n, len(rel.localizing_blocks), rel.nvars, elapsed), rel

