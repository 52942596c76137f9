"""Random small problems for round-trip and solver tests."""
import warnings

import numpy as np

from ncrelax import Polynomial, generate_variables, get_relaxation


def random_polynomial(rng, variables, max_degree, nterms=3):
    terms = {}
    for _ in range(nterms):
        k = int(rng.integers(0, max_degree + 1))
        word = []
        for _ in range(k):
            var = variables[int(rng.integers(len(variables)))]
            word.append(var.letter(bool(rng.integers(2))))
        terms[tuple(word)] = float(rng.integers(-4, 5)) / 2
    return Polynomial(terms)


def random_relaxation(rng):
    n = int(rng.integers(1, 4))
    variables = generate_variables(n, hermitian=bool(rng.integers(2)))
    order = int(rng.integers(1, 3))
    obj = random_polynomial(rng, variables, 2 * order)
    ineqs = [random_polynomial(rng, variables, 2) for _ in range(int(rng.integers(0, 3)))]
    eqs = [random_polynomial(rng, variables, 2) for _ in range(int(rng.integers(0, 2)))]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return get_relaxation(variables, obj, ineqs, eqs, [], order)


def random_sdp_data(rng, m, sizes):
    """Dense random symmetric F_1..F_m, F_0 with a strictly feasible point."""
    F = [[(lambda G: (G + G.T) / 2)(rng.standard_normal((n, n))) for n in sizes] for _ in range(m)]
    x0 = rng.standard_normal(m)
    # F0 chosen so sum F_l x0_l - F0 = I
    F0 = [sum(F[l][b] * x0[l] for l in range(m)) - np.eye(n) for b, n in enumerate(sizes)]
    # c = A(Y0) with Y0 positive definite keeps the dual strictly feasible
    Y0 = [(lambda G: G @ G.T + np.eye(n))(rng.standard_normal((n, n))) for n in sizes]
    c = np.array([sum(np.sum(F[l][b] * Y0[b]) for b in range(len(sizes))) for l in range(m)])
    return F0, F, c
