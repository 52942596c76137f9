import random

import pytest
from hypothesis import given, strategies as st

from ncrelax.algebra import Monomial, generate_variables
from ncrelax.rewrite import (CycleSuspected, DuplicateLhs, EmptyLhs, RewriteError, RewriteRule,
                             apply_once, normalize, rebuild_count, validate_rules)

X = generate_variables(3, hermitian=True)
A, B, C = (x.letter() for x in X)


def rule(lhs, rhs=(), sign=1):
    return RewriteRule(tuple(lhs), tuple(rhs), sign)


def test_validate_idempotent_rule():
    rs = validate_rules([rule((A, A), (A,))])
    assert rs.max_lhs_degree == 2 and len(rs) == 1


def test_validate_duplicate_lhs():
    with pytest.raises(DuplicateLhs):
        validate_rules([rule((A, A), (A,)), rule((A, A), ())])


def test_validate_commutation_rule():
    rs = validate_rules([rule((B, A), (A, B))])
    assert rs.table[(B, A)] == ((A, B), 1)


def test_empty_lhs_and_bad_sign():
    with pytest.raises(EmptyLhs):
        rule((), (A,))
    with pytest.raises(RewriteError):
        rule((A,), (), sign=2)


def test_apply_once_match():
    rs = validate_rules([rule((A, A), (A,))])
    out, changed = apply_once(Monomial(1.0, (A, A, B)), rs)
    assert changed and out == Monomial(1.0, (A, B))


def test_apply_once_no_match_returns_same_object():
    rs = validate_rules([rule((A, A), (A,))])
    m = Monomial(1.0, (B, B))
    before = rebuild_count()
    out, changed = apply_once(m, rs)
    assert out is m and not changed
    assert rebuild_count() == before


def test_longest_match_wins():
    rs = validate_rules([rule((A, A), (A,)), rule((A, A, A), ())])
    out, changed = apply_once(Monomial(1.0, (A, A, A)), rs)
    assert changed and out.word == ()


def test_normalize_two_passes():
    rs = validate_rules([rule((A, A), (A,))])
    assert normalize(Monomial(1.0, (A, A, A, B)), rs) == Monomial(1.0, (A, B))


def test_normalize_commutation():
    rs = validate_rules([rule((B, A), (A, B))])
    assert normalize(Monomial(1.0, (B, A)), rs).word == (A, B)


def test_cycle_detected():
    rs = validate_rules([rule((A, B), (B, A)), rule((B, A), (A, B))], max_passes=50)
    with pytest.raises(CycleSuspected):
        normalize(Monomial(1.0, (A, B)), rs)


def test_signs_multiply():
    rs = validate_rules([rule((B, A), (A, B), -1)])
    assert normalize(Monomial(2.0, (B, A)), rs) == Monomial(-2.0, (A, B))
    assert normalize(Monomial(2.0, (B, A, A)), rs) == Monomial(2.0, (A, A, B))
    assert normalize(Monomial(2.0, (B, B, A)), rs) == Monomial(2.0, (A, B, B))


def test_normalize_without_rules_is_identity():
    rs = validate_rules([])
    m = Monomial(1.0, (C, A))
    assert normalize(m, rs) is m


letters = st.sampled_from([A, B, C])
words = st.lists(letters, max_size=8).map(tuple)


def random_decreasing_rules(rng, nrules):
    """Rules with rhs strictly shorter than lhs."""
    table = {}
    for _ in range(nrules):
        lhs = tuple(rng.choice([A, B, C]) for _ in range(rng.randint(1, 3)))
        rhs = tuple(rng.choice([A, B, C]) for _ in range(rng.randint(0, len(lhs) - 1)))
        table[lhs] = rule(lhs, rhs, rng.choice([1, -1]))
    return validate_rules(table.values())


@given(st.integers(0, 10 ** 6), words)
def test_degree_never_increases(seed, w):
    rs = random_decreasing_rules(random.Random(seed), 4)
    out = normalize(Monomial(1.0, w), rs)
    assert len(out.word) <= len(w)
    assert abs(out.coeff) == 1.0


@given(words)
def test_commutation_rules_sort_letters(w):
    rules = [rule((y, x), (x, y)) for i, x in enumerate([A, B, C]) for y in [A, B, C][i + 1:]]
    out = normalize(Monomial(3.0, w), validate_rules(rules))
    assert out.word == tuple(sorted(w)) and out.coeff == 3.0


@given(st.integers(0, 10 ** 6), words)
def test_positive_rules_keep_coefficient(seed, w):
    rng = random.Random(seed)
    rs = validate_rules([rule(r.lhs, r.rhs, 1) for r in random_decreasing_rules(rng, 3).rules])
    assert normalize(Monomial(1.5, w), rs).coeff == 1.5


@given(st.integers(0, 10 ** 6), words)
def test_normalize_idempotent(seed, w):
    rs = random_decreasing_rules(random.Random(seed), 5)
    once = normalize(Monomial(1.0, w), rs)
    assert normalize(once, rs) == once
