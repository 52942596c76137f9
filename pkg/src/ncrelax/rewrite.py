"""Binomial substitution rules and the longest-match rewriting engine."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Tuple

from .algebra import Monomial, Word, format_word

__all__ = [
    "RewriteRule",
    "RuleSet",
    "RewriteError",
    "DuplicateLhs",
    "EmptyLhs",
    "CycleSuspected",
    "validate_rules",
    "apply_once",
    "normalize",
    "rebuild_count",
    "DEFAULT_MAX_PASSES",
]

DEFAULT_MAX_PASSES = 1000

# Incremented whenever apply_once has to build a new monomial.
_rebuilds = 0


def rebuild_count() -> int:
    return _rebuilds


class RewriteError(ValueError):
    pass


class DuplicateLhs(RewriteError):
    pass


class EmptyLhs(RewriteError):
    pass


class CycleSuspected(RewriteError):
    """Raised when normalization does not reach a fixpoint within the pass cap."""

    def __init__(self, message: str, word: Word = ()):
        super().__init__(message)
        self.word = word


@dataclass(frozen=True)
class RewriteRule:
    """``lhs -> sign * rhs`` with ``sign`` in {+1, -1}."""

    lhs: Word
    rhs: Word = ()
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(self.rhs))
        if not self.lhs:
            raise EmptyLhs("substitution rule needs a nonempty left-hand side")
        if self.sign not in (1, -1):
            raise RewriteError(f"rule sign must be +1 or -1, got {self.sign!r}")

    def to_string(self, names) -> str:
        rhs = format_word(self.rhs, names)
        return f"{format_word(self.lhs, names)} -> {'-' if self.sign < 0 else ''}{rhs}"


@dataclass(frozen=True)
class RuleSet:
    rules: Tuple[RewriteRule, ...] = ()
    max_passes: int = DEFAULT_MAX_PASSES
    table: Dict[Word, Tuple[Word, int]] = field(default_factory=dict, compare=False, repr=False)
    # distinct lhs lengths, longest first
    lengths: Tuple[int, ...] = field(default=(), compare=False, repr=False)

    @property
    def max_lhs_degree(self) -> int:
        return self.lengths[0] if self.lengths else 0

    def __len__(self) -> int:
        return len(self.rules)

    def __bool__(self) -> bool:
        return bool(self.rules)


EMPTY_RULES = RuleSet()


def validate_rules(rules: Iterable[RewriteRule], max_passes: int = DEFAULT_MAX_PASSES) -> RuleSet:
    """Index ``rules`` by left-hand side.

    Raises :class:`DuplicateLhs` if two rules rewrite the same word.
    """
    if isinstance(rules, RuleSet):
        return rules
    if max_passes < 1:
        raise ValueError("max_passes must be positive")
    rules = tuple(rules)
    table = {}
    for rule in rules:
        if not rule.lhs:
            raise EmptyLhs("substitution rule needs a nonempty left-hand side")
        if rule.lhs in table:
            raise DuplicateLhs(f"two rules share the left-hand side {rule.lhs!r}")
        table[rule.lhs] = (rule.rhs, rule.sign)
    lengths = tuple(sorted({len(lhs) for lhs in table}, reverse=True))
    return RuleSet(rules, max_passes, table, lengths)


def apply_once(m: Monomial, rs: RuleSet) -> Tuple[Monomial, bool]:
    """Rewrite the leftmost match, preferring the longest lhs there.

    Returns ``m`` itself when nothing matches.
    """
    global _rebuilds
    word = m.word
    n = len(word)
    if not rs.lengths or not n or m.coeff == 0:
        return m, False
    table = rs.table
    lengths = rs.lengths
    for start in range(n):
        for length in lengths:
            stop = start + length
            if stop > n:
                continue
            hit = table.get(word[start:stop])
            if hit is not None:
                rhs, sign = hit
                _rebuilds += 1
                new = Monomial(m.coeff * sign, word[:start] + rhs + word[stop:])
                return new, True
    return m, False


def normalize(m: Monomial, rs: RuleSet) -> Monomial:
    """Apply rules until no lhs occurs in the word."""
    for _ in range(rs.max_passes):
        m, changed = apply_once(m, rs)
        if not changed:
            return m
    if apply_once(m, rs)[1]:
        raise CycleSuspected(
            f"no fixpoint after {rs.max_passes} substitutions; the rules are probably cyclic",
            m.word,
        )
    return m
