"""Free *-algebra over noncommuting variables.

Words are plain tuples of :class:`Letter`; the empty tuple is the identity.
Polynomials map words to real coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from numbers import Real
from typing import Dict, Iterable, Mapping, NamedTuple, Sequence, Tuple, Union

__all__ = [
    "Variable",
    "Letter",
    "Word",
    "Monomial",
    "Polynomial",
    "generate_variables",
    "involve",
    "concat",
    "degree",
    "format_word",
    "generate_basis",
]


class Letter(NamedTuple):
    """A single generator, possibly starred.

    Hermitian letters are never starred; construct letters through
    :meth:`Variable.letter` to get that normalization for free.
    """

    var: int
    starred: bool = False
    hermitian: bool = False

    def star(self) -> "Letter":
        if self.hermitian:
            return self
        return Letter(self.var, not self.starred, False)


Word = Tuple[Letter, ...]

ONE: Word = ()


def involve(word: Word) -> Word:
    """Reverse ``word`` and star every letter."""
    return tuple(letter.star() for letter in reversed(word))


def concat(v: Word, w: Word) -> Word:
    return v + w


def degree(word: Word) -> int:
    return len(word)


def _run_length(word: Word):
    out = []
    for letter in word:
        if out and out[-1][0] == letter:
            out[-1][1] += 1
        else:
            out.append([letter, 1])
    return out


def format_word(word: Word, names: Sequence[str], powers: bool = True) -> str:
    """Render a word as ``x1^2*x2'``; the empty word renders as ``1``."""
    if not word:
        return "1"
    parts = []
    runs = _run_length(word) if powers else [[letter, 1] for letter in word]
    for letter, count in runs:
        text = names[letter.var] + ("'" if letter.starred else "")
        if count > 1:
            text += f"^{count}"
        parts.append(text)
    return "*".join(parts)


class _Arithmetic:
    """Operator overloads shared by variables and polynomials."""

    def _as_poly(self) -> "Polynomial":
        raise NotImplementedError

    def __add__(self, other):
        return self._as_poly().add(Polynomial.coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._as_poly().add(Polynomial.coerce(other).scale(-1.0))

    def __rsub__(self, other):
        return Polynomial.coerce(other).add(self._as_poly().scale(-1.0))

    def __neg__(self):
        return self._as_poly().scale(-1.0)

    def __mul__(self, other):
        if isinstance(other, Real):
            return self._as_poly().scale(float(other))
        return self._as_poly().mul(Polynomial.coerce(other))

    def __rmul__(self, other):
        if isinstance(other, Real):
            return self._as_poly().scale(float(other))
        return Polynomial.coerce(other).mul(self._as_poly())

    def __truediv__(self, other):
        if not isinstance(other, Real):
            return NotImplemented
        return self._as_poly().scale(1.0 / float(other))

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = Polynomial.constant(1.0)
        base = self._as_poly()
        for _ in range(exponent):
            result = result.mul(base)
        return result


@dataclass(frozen=True, eq=True)
class Variable(_Arithmetic):
    id: int
    name: str
    hermitian: bool = False

    def letter(self, starred: bool = False) -> Letter:
        return Letter(self.id, bool(starred) and not self.hermitian, self.hermitian)

    @property
    def adjoint(self) -> "Polynomial":
        return Polynomial({(self.letter(True),): 1.0})

    def _as_poly(self) -> "Polynomial":
        return Polynomial({(self.letter(),): 1.0})


def generate_variables(n: int, hermitian: bool = False, prefix: str = "x"):
    """Return ``n`` variables named ``x1 .. xn`` with ids ``0 .. n-1``."""
    return [Variable(i, f"{prefix}{i + 1}", hermitian) for i in range(n)]


class Monomial(NamedTuple):
    coeff: float
    word: Word

    @classmethod
    def make(cls, coeff: float, word: Word) -> "Monomial":
        if coeff == 0:
            return ZERO
        return cls(float(coeff), tuple(word))


ZERO = Monomial(0.0, ONE)


class Polynomial(_Arithmetic):
    """Finite real combination of words.

    Instances are treated as immutable; all operations return new objects.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[Mapping[Word, float], Iterable[Tuple[Word, float]], None] = None):
        acc: Dict[Word, float] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for word, coeff in items:
                word = tuple(word)
                acc[word] = acc.get(word, 0.0) + float(coeff)
        self._terms = {w: c for w, c in acc.items() if c != 0}

    @classmethod
    def constant(cls, value: float) -> "Polynomial":
        return cls({ONE: value})

    @classmethod
    def coerce(cls, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            return value
        if isinstance(value, Variable):
            return value._as_poly()
        if isinstance(value, Monomial):
            return cls({value.word: value.coeff})
        if isinstance(value, Real):
            return cls.constant(float(value))
        raise TypeError(f"cannot convert {type(value).__name__} to Polynomial")

    def _as_poly(self) -> "Polynomial":
        return self

    @property
    def terms(self) -> Dict[Word, float]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def coefficient(self, word: Word) -> float:
        return self._terms.get(tuple(word), 0.0)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def add(self, other: "Polynomial") -> "Polynomial":
        acc = dict(self._terms)
        for word, coeff in other._terms.items():
            acc[word] = acc.get(word, 0.0) + coeff
        return Polynomial(acc)

    def scale(self, factor: float) -> "Polynomial":
        return Polynomial({w: c * factor for w, c in self._terms.items()})

    def mul(self, other: "Polynomial") -> "Polynomial":
        acc: Dict[Word, float] = {}
        for v, a in self._terms.items():
            for w, b in other._terms.items():
                word = v + w
                acc[word] = acc.get(word, 0.0) + a * b
        return Polynomial(acc)

    def adjoint(self) -> "Polynomial":
        return Polynomial({involve(w): c for w, c in self._terms.items()})

    def is_hermitian(self) -> bool:
        return self.adjoint() == self

    def hermitian_part(self) -> "Polynomial":
        return self.add(self.adjoint()).scale(0.5)

    def monomials(self):
        return [Monomial(c, w) for w, c in self._terms.items()]

    def __eq__(self, other) -> bool:
        if isinstance(other, (Real, Variable, Monomial)):
            other = Polynomial.coerce(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: (len(t[0]), t[0]))

    def to_string(self, names: Sequence[str]) -> str:
        if not self._terms:
            return "0"
        out = []
        for k, (word, coeff) in enumerate(self.sorted_terms()):
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            if not word:
                body = repr(mag)
            elif mag == 1.0:
                body = format_word(word, names)
            else:
                body = f"{mag!r}*{format_word(word, names)}"
            if k == 0:
                out.append(body if sign == "+" else f"-{body}")
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __repr__(self) -> str:
        names = _default_names(self._terms)
        return f"Polynomial({self.to_string(names)})"


def _default_names(terms) -> list:
    top = max((letter.var for word in terms for letter in word), default=-1)
    return [f"x{i + 1}" for i in range(top + 1)]


def alphabet(variables: Sequence[Variable]) -> list:
    """Letters in generation order: by variable id, unstarred before starred."""
    letters = []
    for var in sorted(variables, key=lambda v: v.id):
        letters.append(var.letter(False))
        if not var.hermitian:
            letters.append(var.letter(True))
    return letters


def generate_basis(variables: Sequence[Variable], order: int, rules=None) -> list:
    """Words of degree at most ``order``, normalized and deduplicated.

    Words are produced degree by degree in generation order; the first
    occurrence of each normalized word fixes its position.
    """
    from .rewrite import RuleSet, normalize, validate_rules

    if order < 0:
        raise ValueError("order must be nonnegative")
    if rules is not None and not isinstance(rules, RuleSet):
        rules = validate_rules(rules)
    letters = alphabet(variables)
    seen = set()
    basis = []
    for k in range(order + 1):
        for word in product(letters, repeat=k):
            if rules is not None:
                word = normalize(Monomial(1.0, word), rules).word
            if word not in seen:
                seen.add(word)
                basis.append(word)
    return basis
