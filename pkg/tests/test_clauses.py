import pytest
from hypothesis import given
from hypothesis import strategies as st

from winrat.clauses import (
    TAUTOLOGY,
    Literal,
    clause_hash,
    decode_literal,
    encode_literal,
    is_tautology,
    lit_key,
    normalize_clause,
)

lits = st.integers(-30, 30).filter(bool)


def test_encode_literal():
    assert encode_literal(3) == Literal(3, False)
    assert encode_literal(-7) == Literal(7, True)
    assert ~encode_literal(-7) == encode_literal(7)


def test_encode_zero_rejected():
    with pytest.raises(ValueError):
        encode_literal(0)
    with pytest.raises(ValueError):
        Literal(0)


@given(lits)
def test_encode_roundtrip(d):
    assert decode_literal(encode_literal(d)) == d
    assert encode_literal(d).complement().complement() == encode_literal(d)


def test_normalize_examples():
    assert normalize_clause([2, -1, 2]) == (-1, 2)
    assert normalize_clause([1, -1]) is TAUTOLOGY
    assert normalize_clause([]) == ()


@given(st.lists(lits, max_size=8))
def test_normalize_idempotent(raw):
    once = normalize_clause(raw)
    if once is TAUTOLOGY:
        assert is_tautology(raw)
    else:
        assert normalize_clause(once) == once


def test_hash_examples():
    assert clause_hash([3]) == 7
    assert clause_hash([1, 2, -5]) == 46
    assert clause_hash([2, -5, 1]) == clause_hash([1, 2, -5])


@given(st.lists(lits, max_size=10, unique=True), st.randoms())
def test_hash_permutation_invariant(c, rnd):
    p = list(c)
    rnd.shuffle(p)
    assert clause_hash(p) == clause_hash(c)


def test_hash_wraps_to_64_bits():
    big = [(1 << 62) + k for k in range(1, 5)]
    assert 0 <= clause_hash(big) < 1 << 64


def test_lit_key_injective():
    keys = {lit_key(d) for d in range(-50, 51) if d}
    assert len(keys) == 100
