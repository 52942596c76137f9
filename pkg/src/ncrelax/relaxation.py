"""Moment and localizing matrices of the order-d relaxation.

Moments of a word and of its adjoint are one and the same variable (the
coefficient field is real), so every word is looked up through its
canonical representative.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import Monomial, Polynomial, Variable, Word, format_word, generate_basis, involve
from .rewrite import EMPTY_RULES, RuleSet, normalize, validate_rules

__all__ = [
    "AffineExpr",
    "Block",
    "MonomialDictionary",
    "Relaxation",
    "RelaxationError",
    "OrderTooLow",
    "UnknownMoment",
    "canonicalize",
    "moment_matrix",
    "localizing_matrix",
    "translate_objective",
    "get_relaxation",
]

log = logging.getLogger(__name__)


class RelaxationError(ValueError):
    pass


class OrderTooLow(RelaxationError):
    def __init__(self, order: int, required: int):
        super().__init__(f"relaxation order {order} is too low; at least {required} is required")
        self.order = order
        self.required = required


class UnknownMoment(RelaxationError):
    def __init__(self, word: Word):
        super().__init__(f"moment of word {word!r} is not in the monomial dictionary")
        self.word = word


def canonicalize(m: Monomial, rs: RuleSet) -> Monomial:
    """Normal form of ``m`` up to involution.

    Picks the lexicographically smaller of the normalized word and the
    normalized adjoint word. If both normalize to the same word with
    opposite signs the moment is forced to zero.
    """
    a = normalize(m, rs)
    b = normalize(Monomial(m.coeff, involve(m.word)), rs)
    if a.word == b.word:
        if a.coeff != b.coeff:
            return Monomial(0.0, ())
        return a
    return a if a.word < b.word else b


class AffineExpr:
    """``constant + sum(coeffs[l] * y_l)`` with 1-based variable indices."""

    __slots__ = ("constant", "coeffs")

    def __init__(self, constant: float = 0.0, coeffs: Optional[Dict[int, float]] = None):
        self.constant = float(constant)
        self.coeffs = {k: float(v) for k, v in (coeffs or {}).items() if v != 0}

    def add_term(self, index: int, value: float) -> None:
        if index == 0:
            self.constant += value
            return
        total = self.coeffs.get(index, 0.0) + value
        if total == 0:
            self.coeffs.pop(index, None)
        else:
            self.coeffs[index] = total

    def is_zero(self) -> bool:
        return self.constant == 0 and not self.coeffs

    def evaluate(self, x) -> float:
        return self.constant + sum(v * x[k - 1] for k, v in self.coeffs.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineExpr):
            return NotImplemented
        return self.constant == other.constant and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        terms = [f"{v:+g}*y{k}" for k, v in sorted(self.coeffs.items())]
        if self.constant or not terms:
            terms.append(f"{self.constant:+g}")
        return "AffineExpr(" + " ".join(terms) + ")"


@dataclass
class Block:
    """Symmetric block; ``entries`` holds the upper triangle, 0-based ``(i, j)``."""

    size: int
    entries: Dict[Tuple[int, int], AffineExpr] = field(default_factory=dict)
    kind: str = "moment"
    constraint: Optional[int] = None
    basis: List[Word] = field(default_factory=list, repr=False)

    def __getitem__(self, ij) -> AffineExpr:
        i, j = ij
        if i > j:
            i, j = j, i
        return self.entries.get((i, j), AffineExpr())

    def variables(self) -> set:
        return {k for expr in self.entries.values() for k in expr.coeffs}

    def evaluate(self, x) -> np.ndarray:
        mat = np.zeros((self.size, self.size))
        for (i, j), expr in self.entries.items():
            mat[i, j] = mat[j, i] = expr.evaluate(x)
        return mat


class MonomialDictionary:
    """Maps canonical words to SDP variable indices ``1..nvars``.

    Index 0 stands for the empty word, whose moment is fixed to one.
    """

    def __init__(self, rules: RuleSet = EMPTY_RULES, variables: Sequence[Variable] = ()):
        self.rules = rules
        self.variables = list(variables)
        self.index_of: Dict[Word, int] = {}
        self.words_of: List[Word] = []
        self._cache: Dict[Word, Monomial] = {}

    def __len__(self) -> int:
        return len(self.words_of)

    def __contains__(self, word) -> bool:
        return word in self.index_of

    def canonical(self, word: Word) -> Monomial:
        hit = self._cache.get(word)
        if hit is None:
            hit = canonicalize(Monomial(1.0, word), self.rules)
            self._cache[word] = hit
        return hit

    def lookup(self, word: Word, create: bool = False) -> Tuple[int, float]:
        """Return ``(index, sign)`` for the moment of ``word``.

        Index 0 means the constant moment; sign 0 means the moment vanishes.
        """
        canon = self.canonical(word)
        if canon.coeff == 0:
            return 0, 0.0
        if not canon.word:
            return 0, canon.coeff
        index = self.index_of.get(canon.word)
        if index is None:
            if not create:
                raise UnknownMoment(canon.word)
            self.words_of.append(canon.word)
            index = len(self.words_of)
            self.index_of[canon.word] = index
        return index, canon.coeff

    def word(self, index: int) -> Word:
        return () if index == 0 else self.words_of[index - 1]


def moment_matrix(basis: Sequence[Word], rs: RuleSet = EMPTY_RULES,
                  dictionary: Optional[MonomialDictionary] = None):
    """Upper triangle of the moment matrix over ``basis``.

    New moments get indices in row-major first-occurrence order.
    """
    if dictionary is None:
        dictionary = MonomialDictionary(rs)
    lookup = dictionary.lookup
    size = len(basis)
    entries = {}
    adjoints = [involve(v) for v in basis]
    for i in range(size):
        row = adjoints[i]
        for j in range(i, size):
            index, sign = lookup(row + basis[j], create=True)
            if sign == 0:
                continue
            if index == 0:
                entries[i, j] = AffineExpr(sign)
            else:
                entries[i, j] = AffineExpr(0.0, {index: sign})
    return Block(size, entries, "moment", None, list(basis)), dictionary


def localizing_matrix(g: Polynomial, sub_order: int, dictionary: MonomialDictionary,
                      rs: Optional[RuleSet] = None, variables: Optional[Sequence[Variable]] = None,
                      constraint: Optional[int] = None) -> Block:
    """Localizing block of ``g`` over the basis of degree ``sub_order``.

    All moments must already be known to ``dictionary``.
    """
    if sub_order < 0:
        raise ValueError("sub_order must be nonnegative")
    rs = dictionary.rules if rs is None else rs
    if variables is None:
        variables = dictionary.variables
    basis = generate_basis(variables, sub_order, rs)
    terms = list(g.items())
    lookup = dictionary.lookup
    size = len(basis)
    entries = {}
    for i in range(size):
        row = involve(basis[i])
        for j in range(i, size):
            expr = AffineExpr()
            for u, gu in terms:
                index, sign = lookup(row + u + basis[j])
                if sign:
                    expr.add_term(index, gu * sign)
            if not expr.is_zero():
                entries[i, j] = expr
    return Block(size, entries, "localizing", constraint, basis)


def translate_objective(p: Polynomial, dictionary: MonomialDictionary,
                        rs: Optional[RuleSet] = None) -> Tuple[Dict[int, float], float]:
    if rs is not None and rs is not dictionary.rules:
        dictionary = _rebind(dictionary, rs)
    expr = AffineExpr()
    for word, coeff in p.items():
        index, sign = dictionary.lookup(word)
        if sign:
            expr.add_term(index, coeff * sign)
    return dict(expr.coeffs), expr.constant


def _rebind(dictionary: MonomialDictionary, rs: RuleSet) -> MonomialDictionary:
    clone = MonomialDictionary(rs, dictionary.variables)
    clone.index_of = dictionary.index_of
    clone.words_of = dictionary.words_of
    return clone


@dataclass
class Relaxation:
    variables: List[Variable]
    order: int
    basis: List[Word]
    blocks: List[Block]
    dictionary: MonomialDictionary
    objective: Dict[int, float]
    objective_shift: float = 0.0
    rules: RuleSet = EMPTY_RULES

    @property
    def nvars(self) -> int:
        return len(self.dictionary)

    @property
    def block_sizes(self) -> List[int]:
        return [b.size for b in self.blocks]

    @property
    def localizing_blocks(self) -> List[Block]:
        return [b for b in self.blocks if b.kind == "localizing"]

    def moment_words(self, names: Optional[Sequence[str]] = None) -> List[str]:
        names = names or [v.name for v in self.variables]
        return [format_word(w, names) for w in self.dictionary.words_of]

    def evaluate_objective(self, x) -> float:
        return self.objective_shift + sum(v * x[k - 1] for k, v in self.objective.items())


def _required_order(degrees: Sequence[int]) -> int:
    return max((math.ceil(d / 2) for d in degrees), default=0)


def _reduce(p: Polynomial, rs: RuleSet) -> Polynomial:
    return Polynomial((m.word, m.coeff) for m in (normalize(t, rs) for t in p.monomials()))


def _symmetrize(g: Polynomial, rs: RuleSet, what: str) -> Polynomial:
    """Hermitian part of ``g``; warns unless ``g`` is Hermitian modulo the rules."""
    if g.is_hermitian() or _reduce(g, rs) == _reduce(g.adjoint(), rs):
        return g
    warnings.warn(f"{what} is not Hermitian; using its Hermitian part", stacklevel=3)
    return g.hermitian_part()


def get_relaxation(variables: Sequence[Variable], objective, inequalities=(), equalities=(),
                   substitutions=(), order: int = 1) -> Relaxation:
    """Build the order-``order`` relaxation.

    Inequalities mean ``g >= 0`` and equalities ``g == 0``; each equality
    becomes the pair ``g >= 0``, ``-g >= 0``. ``substitutions`` is a
    sequence of :class:`~ncrelax.rewrite.RewriteRule` or a prepared
    :class:`~ncrelax.rewrite.RuleSet`.
    """
    objective = Polynomial.coerce(objective)
    inequalities = [Polynomial.coerce(g) for g in inequalities]
    equalities = [Polynomial.coerce(g) for g in equalities]
    rs = validate_rules(substitutions)

    degrees = [objective.degree] + [g.degree for g in inequalities + equalities]
    required = max(_required_order(degrees), 0)
    if order < required:
        raise OrderTooLow(order, required)

    objective = _symmetrize(objective, rs, "objective")

    basis = generate_basis(variables, order, rs)
    dictionary = MonomialDictionary(rs, variables)
    moment, _ = moment_matrix(basis, rs, dictionary)
    blocks = [moment]

    constraints = []
    for k, g in enumerate(inequalities):
        constraints.append((k, g.degree, _symmetrize(g, rs, f"inequality {k + 1}")))
    offset = len(inequalities)
    for k, g in enumerate(equalities):
        sym = _symmetrize(g, rs, f"equality {k + 1}")
        constraints.append((offset + k, g.degree, sym))
        constraints.append((offset + k, g.degree, sym.scale(-1.0)))

    for cid, deg, g in constraints:
        sub_order = order - math.ceil(deg / 2)
        blocks.append(localizing_matrix(g, sub_order, dictionary, rs, variables, constraint=cid))

    coeffs, shift = translate_objective(objective, dictionary)
    log.debug("relaxation: %d variables, blocks %s", len(dictionary), [b.size for b in blocks])
    return Relaxation(list(variables), order, basis, blocks, dictionary, coeffs, shift, rs)
