"""Sparse SDP relaxations of noncommutative polynomial optimization problems."""
from .algebra import (Letter, Monomial, Polynomial, Variable, concat, degree, format_word,
                      generate_basis, generate_variables, involve)
from .relaxation import (AffineExpr, Block, MonomialDictionary, OrderTooLow, Relaxation,
                         UnknownMoment, get_relaxation, localizing_matrix, moment_matrix,
                         translate_objective)
from .rewrite import (CycleSuspected, DuplicateLhs, EmptyLhs, RewriteRule, RuleSet, apply_once,
                      normalize, validate_rules)
from .sdpa import SDPProblem, SparseEntry, dumps, loads, read_sdpa, to_sdp, write_sdpa
from .solver import SDPSolution, SolverOptions, check_feasibility, solve

__version__ = "0.1.0"
