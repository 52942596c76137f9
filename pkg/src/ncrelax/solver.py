"""Dense primal-dual interior-point solver for the SDPA standard form.

Primal:  min c.x   s.t.  Z = sum_l F_l x_l - F_0  is PSD
Dual:    max F_0.Y s.t.  F_l.Y = c_l,  Y PSD

Infeasible-start path following with the HKM search direction and a
Mehrotra predictor-corrector step. Meant for small problems only.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.linalg

from .sdpa import SDPProblem

__all__ = [
    "SolverOptions",
    "SDPSolution",
    "FeasibilityReport",
    "NumericalFailure",
    "solve",
    "check_feasibility",
    "assemble",
]

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
MAX_ITER = "max_iter"
INFEASIBLE = "infeasible_suspected"


class NumericalFailure(ArithmeticError):
    pass


@dataclass(frozen=True)
class SolverOptions:
    tol_gap: float = 1e-8
    max_iter: int = 200
    initial_scale: float = 1.0
    # residual tolerance; defaults to tol_gap
    tol_feas: Optional[float] = None

    def __post_init__(self):
        if not self.tol_gap > 0:
            raise ValueError("tol_gap must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not self.initial_scale > 0:
            raise ValueError("initial_scale must be positive")


@dataclass
class SDPSolution:
    primal_obj: float
    dual_obj: float
    x: np.ndarray
    status: str
    iterations: int
    Y: List[np.ndarray] = field(default_factory=list, repr=False)
    Z: List[np.ndarray] = field(default_factory=list, repr=False)
    history: List[dict] = field(default_factory=list, repr=False)

    @property
    def gap(self) -> float:
        return self.primal_obj - self.dual_obj


@dataclass
class FeasibilityReport:
    min_eigenvalues: List[float]
    tol: float

    @property
    def feasible(self) -> bool:
        return all(v >= -self.tol for v in self.min_eigenvalues)

    @property
    def min_eigenvalue(self) -> float:
        return min(self.min_eigenvalues, default=0.0)


def assemble(problem: SDPProblem):
    """Dense constraint data: ``F0[b]`` and ``F[b]`` of shape (m, n_b, n_b).

    Diagonal blocks are expanded to full matrices.
    """
    m = problem.nvars
    sizes = [abs(s) for s in problem.block_sizes]
    F = [np.zeros((m, n, n)) for n in sizes]
    F0 = [np.zeros((n, n)) for n in sizes]
    for l, b, i, j, v in problem.entries:
        target = F0[b - 1] if l == 0 else F[b - 1][l - 1]
        target[i - 1, j - 1] = v
        target[j - 1, i - 1] = v
    return F0, F


def check_feasibility(problem: SDPProblem, x, tol: float = 1e-9) -> FeasibilityReport:
    """Minimum eigenvalue of ``sum F_l x_l - F_0`` per block."""
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.nvars,):
        raise ValueError(f"expected {problem.nvars} values, got shape {x.shape}")
    F0, F = assemble(problem)
    mins = []
    for F0b, Fb in zip(F0, F):
        mat = np.tensordot(x, Fb, axes=1) - F0b if len(x) else -F0b
        mins.append(float(np.linalg.eigvalsh(mat)[0]))
    return FeasibilityReport(mins, tol)


def _max_step(X: np.ndarray, dX: np.ndarray) -> float:
    """Largest alpha with X + alpha dX still PSD (X positive definite)."""
    try:
        L = np.linalg.cholesky(X)
    except np.linalg.LinAlgError:
        raise NumericalFailure("iterate lost positive definiteness") from None
    W = scipy.linalg.solve_triangular(L, dX, lower=True)
    W = scipy.linalg.solve_triangular(L, W.T, lower=True)
    lam = np.linalg.eigvalsh((W + W.T) / 2)[0]
    return np.inf if lam >= 0 else -1.0 / lam


def _inner(A: List[np.ndarray], B: List[np.ndarray]) -> float:
    return float(sum(np.vdot(a, b) for a, b in zip(A, B)))


def _sym(M: np.ndarray) -> np.ndarray:
    return (M + M.T) / 2


def solve(problem: SDPProblem, opts: Optional[SolverOptions] = None) -> SDPSolution:
    opts = opts or SolverOptions()
    tol_feas = opts.tol_feas if opts.tol_feas is not None else opts.tol_gap
    m = problem.nvars
    c = np.array(problem.c, dtype=float)
    F0_all, F_all = assemble(problem)

    # Blocks without any data are 0 >= 0 and carry no information.
    keep = [b for b in range(len(F0_all)) if np.any(F0_all[b]) or np.any(F_all[b])]
    F0 = [F0_all[b] for b in keep]
    F = [F_all[b] for b in keep]
    sizes = [f.shape[0] for f in F0]
    N = sum(sizes)

    def A(Ys):
        out = np.zeros(m)
        for Fb, Yb in zip(F, Ys):
            out += Fb.reshape(m, Yb.size) @ Yb.ravel()
        return out

    def AT(x):
        return [np.tensordot(x, Fb, axes=1) if m else np.zeros_like(F0b) for Fb, F0b in zip(F, F0)]

    if N == 0:
        x = np.zeros(m)
        status = OPTIMAL if not np.any(c) else INFEASIBLE
        return SDPSolution(0.0, 0.0, x, status, 0)

    # SDPT3-style starting point
    normF = [np.sqrt(sum(np.sum(Fb[l] ** 2) for Fb in F)) for l in range(m)]
    normF0 = np.sqrt(sum(np.sum(f ** 2) for f in F0))
    xi = max(10.0, np.sqrt(N), N * max(((1 + abs(c[l])) / (1 + normF[l]) for l in range(m)), default=1.0))
    eta = max(10.0, np.sqrt(N), max(normF, default=0.0), normF0)
    x = np.zeros(m)
    Y = [opts.initial_scale * xi * np.eye(n) for n in sizes]
    Z = [opts.initial_scale * eta * np.eye(n) for n in sizes]

    norm_c = np.linalg.norm(c)
    history = []
    status = MAX_ITER
    it = 0
    for it in range(1, opts.max_iter + 1):
        ATx = AT(x)
        Rp = [a - f0 - z for a, f0, z in zip(ATx, F0, Z)]
        rd = c - A(Y)
        p_obj = float(c @ x)
        d_obj = _inner(F0, Y)
        mu = _inner(Z, Y) / N
        rp_norm = np.sqrt(sum(np.sum(r ** 2) for r in Rp))
        rd_norm = float(np.linalg.norm(rd))
        history.append(dict(iteration=it - 1, primal=p_obj, dual=d_obj, mu=mu,
                            rp=rp_norm, rd=rd_norm, slack=abs(rd @ x) + abs(_inner(Rp, Y))))
        log.debug("it %3d  p=% .9e  d=% .9e  mu=%.2e  rp=%.2e  rd=%.2e",
                  it - 1, p_obj, d_obj, mu, rp_norm, rd_norm)

        if (abs(p_obj - d_obj) <= opts.tol_gap * (1 + abs(p_obj))
                and rp_norm <= tol_feas * (1 + normF0) and rd_norm <= tol_feas * (1 + norm_c)
                and mu <= opts.tol_gap * (1 + abs(p_obj))):
            status = OPTIMAL
            break
        if it == 1:
            rp0, rd0 = rp_norm, rd_norm
        elif rp_norm > 1e6 * (1 + rp0) or rd_norm > 1e6 * (1 + rd0):
            status = INFEASIBLE
            break
        if _diverging(Y, Z, x, c, F0, A, AT, d_obj, p_obj):
            status = INFEASIBLE
            break
        # complementarity is exhausted but a residual is not: no feasible pair
        if mu <= 1e-6 * opts.tol_gap * (1 + abs(p_obj)):
            status = INFEASIBLE
            break

        try:
            Zinv = [np.linalg.inv(np.linalg.cholesky(z)) for z in Z]
        except np.linalg.LinAlgError:
            raise NumericalFailure("Z lost positive definiteness") from None
        Zinv = [li.T @ li for li in Zinv]

        # Schur complement M_ij = F_i . (Z^-1 F_j Y)
        M = np.zeros((m, m))
        for zi, Fb, y in zip(Zinv, F, Y):
            Gb = zi @ Fb @ y
            M += Fb.reshape(m, y.size) @ Gb.reshape(m, y.size).T
        M = _sym(M)
        factor = _factor(M)

        def direction(sigma_mu, corr):
            # dY = sym(Z^-1 (sigma_mu I - Z Y - corr - dZ Y)), dZ = A^T dx + Rp
            base = [sigma_mu * zi - y - zi @ (cr + r @ y)
                    for zi, y, cr, r in zip(Zinv, Y, corr, Rp)]
            rhs = A(base) - rd
            dx = _solve_factor(factor, rhs)
            ATdx = AT(dx)
            dZ = [a + r for a, r in zip(ATdx, Rp)]
            dY = [_sym(b - zi @ a @ y) for b, zi, a, y in zip(base, Zinv, ATdx, Y)]
            return dx, dZ, dY

        zero = [np.zeros_like(y) for y in Y]
        dx, dZ, dY = direction(0.0, zero)
        ap = min(1.0, min(_max_step(z, d) for z, d in zip(Z, dZ)))
        ad = min(1.0, min(_max_step(y, d) for y, d in zip(Y, dY)))
        mu_aff = _inner([z + ap * d for z, d in zip(Z, dZ)], [y + ad * d for y, d in zip(Y, dY)]) / N
        sigma = min(1.0, (mu_aff / mu) ** 3) if mu > 0 else 0.0
        corr = [dz @ dy for dz, dy in zip(dZ, dY)]
        dx, dZ, dY = direction(sigma * mu, corr)

        gamma = 0.95
        ap = min(1.0, gamma * min(_max_step(z, d) for z, d in zip(Z, dZ)))
        ad = min(1.0, gamma * min(_max_step(y, d) for y, d in zip(Y, dY)))
        x = x + ap * dx
        Z = [_sym(z + ap * d) for z, d in zip(Z, dZ)]
        Y = [_sym(y + ad * d) for y, d in zip(Y, dY)]
        if not (np.all(np.isfinite(x)) and all(np.all(np.isfinite(y)) for y in Y)):
            raise NumericalFailure("iterates became non-finite")
    else:
        it = opts.max_iter

    p_obj = float(c @ x)
    d_obj = _inner(F0, Y)
    if status == MAX_ITER and _diverging(Y, Z, x, c, F0, A, AT, d_obj, p_obj, loose=True):
        status = INFEASIBLE
    Y_full, Z_full = _expand(Y, keep, F0_all), _expand(Z, keep, F0_all)
    return SDPSolution(p_obj, d_obj, x, status, it, Y_full, Z_full, history)


def _expand(mats, keep, template):
    out = [np.zeros_like(t) for t in template]
    for k, b in enumerate(keep):
        out[b] = mats[k]
    return out


def _factor(M: np.ndarray):
    if M.shape[0] == 0:
        return None
    try:
        return ("chol", scipy.linalg.cho_factor(M))
    except np.linalg.LinAlgError:
        return ("lstsq", M)


def _solve_factor(factor, rhs: np.ndarray) -> np.ndarray:
    if factor is None:
        return np.zeros(0)
    kind, data = factor
    if kind == "chol":
        out = scipy.linalg.cho_solve(data, rhs)
    else:
        out = np.linalg.lstsq(data, rhs, rcond=None)[0]
    if not np.all(np.isfinite(out)):
        raise NumericalFailure("Schur complement system could not be solved")
    return out


def _diverging(Y, Z, x, c, F0, A, AT, d_obj, p_obj, loose=False) -> bool:
    """Heuristic Farkas-style test for primal or dual infeasibility."""
    ratio = 1e-4 if loose else 1e-8
    if d_obj > 0:
        # Y with A(Y) ~ 0 and F0.Y > 0 certifies an empty primal set
        if np.linalg.norm(A(Y)) <= ratio * d_obj and d_obj > 1e6:
            return True
    if p_obj < 0 and len(x):
        # direction x with sum F_l x_l PSD and c.x < 0 makes the primal unbounded
        ATx = AT(x)
        worst = min((np.linalg.eigvalsh(a)[0] for a in ATx), default=0.0)
        if worst >= -ratio * -p_obj and -p_obj > 1e6 * (1 + max((np.abs(f).max() for f in F0), default=0)):
            return True
    return False
