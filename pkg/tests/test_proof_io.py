import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from winrat.clauses import clause_hash
from winrat.proof_io import (
    ADD,
    DELETE,
    IntegrityError,
    ParseError,
    load_proof,
    parse_dimacs,
    parse_proof_line,
    proof_from_lines,
    reload_inference,
)


def test_parse_dimacs_basic():
    f = parse_dimacs(b"p cnf 2 2\n1 2 0\n-1 0\n")
    assert f.num_vars == 2
    assert f.clauses == [(1, 2), (-1,)]


def test_parse_dimacs_tautology_kept():
    f = parse_dimacs(b"c comment\np cnf 1 1\n1 -1 0\n")
    assert f.tautologies() == [0]


def test_parse_dimacs_multiline_clause_and_count_mismatch(caplog):
    f = parse_dimacs(b"p cnf 3 5\n1\n2 0 -3\n0\n")
    assert f.clauses == [(1, 2), (-3,)]
    assert "declares 5" in caplog.text


@pytest.mark.parametrize(
    "data",
    [
        b"p cnf 1 1\n1",
        b"p cnf x 1\n1 0\n",
        b"p cnf 1 1\np cnf 1 1\n",
        b"1 0\n",
        b"p cnf 2 1\n1 a 0\n",
        b"",
    ],
)
def test_parse_dimacs_errors(data):
    with pytest.raises(ParseError):
        parse_dimacs(data)


def test_parse_dimacs_strict_var_bound():
    assert parse_dimacs(b"p cnf 1 1\n2 0\n").num_vars == 2
    with pytest.raises(ParseError, match="line 2"):
        parse_dimacs(b"p cnf 1 1\n2 0\n", strict=True)


def test_parse_proof_line():
    s = parse_proof_line("d -3 4 0")
    assert (s.kind, s.clause) == (DELETE, (-3, 4))
    s = parse_proof_line("0")
    assert (s.kind, s.clause) == (ADD, ())
    assert parse_proof_line("c hint") is None
    assert parse_proof_line("   ") is None
    assert parse_proof_line("5 -1 2 0").pivot == 5


@pytest.mark.parametrize("line", ["1 2", "1 0 2", "1 x 0"])
def test_parse_proof_line_errors(line):
    with pytest.raises(ParseError):
        parse_proof_line(line, offset=17)


def test_load_proof_counts():
    db = load_proof(b"1 0\n0\n")
    assert len(db) == 2 and db.empty_at == 2


def test_load_proof_budget_zero_evicts_everything():
    db = proof_from_lines(["1 2 0", "d 1 2 0", "-2 0", "0"], budget=0)
    assert db.resident_count == 0
    assert all(r.evicted for r in db.inferences)
    assert db.clause(1) == (1, 2)
    assert reload_inference(db, 2) == (-2,)
    assert db.resident_count == 1


def test_reload_resident_is_noop():
    db = proof_from_lines(["1 2 0", "0"])
    assert reload_inference(db, 1) is db.record(1).clause
    assert db.reloads == 0


def test_reload_detects_mutation():
    buf = io.BytesIO(b"1 2 0\n0\n")
    db = load_proof(buf, budget=0)
    buf.seek(0)
    buf.write(b"1 3 0\n")
    with pytest.raises(IntegrityError):
        db.clause(1)


proof_lines_st = st.lists(
    st.tuples(st.booleans(), st.lists(st.integers(-9, 9).filter(bool), max_size=4)),
    max_size=15,
)


def _render(steps):
    return [("d " if d and c else "") + " ".join(map(str, c + [0])) for d, c in steps]


@given(proof_lines_st)
def test_serialize_roundtrip(steps):
    db = proof_from_lines(_render(steps))
    again = load_proof(db.serialize())
    assert [(s.kind, db.step_clause(s)) for s in db.steps] == [(s.kind, again.step_clause(s)) for s in again.steps]


@given(proof_lines_st, st.integers(0, 5))
@settings(max_examples=60)
def test_empty_at_is_first_empty_add(steps, budget):
    db = proof_from_lines(_render(steps), budget)
    sizes = [r.size for r in db.inferences]
    if db.empty_at is None:
        assert 0 not in sizes
    else:
        assert sizes.index(0) == db.empty_at - 1


def test_reload_roundtrip_1000_random_proofs():
    rng = random.Random(5)
    for _ in range(1000):
        clauses = [
            [v if rng.random() < 0.5 else -v for v in rng.sample(range(1, 12), rng.randint(0, 4))]
            for _ in range(rng.randint(1, 8))
        ]
        lines = [" ".join(map(str, c + [0])) for c in clauses]
        full = proof_from_lines(lines)
        lazy = proof_from_lines(lines, budget=0)
        for k in range(1, len(full) + 1):
            assert lazy.clause(k) == full.record(k).clause


def test_evict_reload_cycles_preserve_hash():
    rng = random.Random(9)
    lines = [f"{rng.randint(1, 20)} -{rng.randint(1, 20)} {rng.randint(21, 30)} 0" for _ in range(200)]
    db = proof_from_lines(lines, budget=10)
    kept = {k: proof_from_lines(lines).record(k).clause for k in range(1, 201)}
    for _ in range(10_000):
        k = rng.randint(1, 200)
        if rng.random() < 0.5:
            db.evict(k)
        else:
            c = reload_inference(db, k)
            assert clause_hash(c) == db.record(k).hash == clause_hash(kept[k])


def test_resident_bounded_by_budget_plus_pinned():
    db = proof_from_lines([f"{k} {k + 1} 0" for k in range(1, 50)], budget=3)
    rng = random.Random(2)
    pinned = set()
    for _ in range(2000):
        k = rng.randint(1, 49)
        if k in pinned:
            db.unpin(k)
            pinned.discard(k)
        else:
            db.pin(k)
            pinned.add(k)
        assert db.resident_count <= 3 + db.pinned_count
