import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from helpers import make_session
from winrat.driver import verify
from winrat.proof_io import proof_from_lines
from winrat.rat import (
    EquivalenceBlock,
    build_occurrence_index,
    check_rat,
    match_equivalence_block,
    verify_equivalence_block,
)
from winrat.session import Config, check_rup
from winrat.testkit.generators import gen_pigeonhole
from winrat.testkit.oracle import is_rat
from winrat.testkit.solver import split_proof_lines


def _state(kernel, clauses, n=6):
    s = kernel(n)
    for k, c in enumerate(clauses):
        s.attach(k, c)
    return s


def _rat(kernel, clauses, c, pivot=0):
    s = _state(kernel, clauses)
    occ = build_occurrence_index(enumerate(clauses))
    return check_rat(s, occ, c, pivot, lits_of=lambda k: clauses[k])


def test_occurrence_index_examples():
    occ = build_occurrence_index(enumerate([(1, 2), (-1,)]))
    assert (occ[1], occ[-1], occ[2], occ[-2]) == ([0], [1], [0], [])
    assert build_occurrence_index([]).literals() == []


def test_occurrence_index_matches_filter():
    rng = random.Random(1)
    cls = [tuple(rng.sample([1, -1, 2, -2, 3, -3, 4], 3)) for _ in range(30)]
    occ = build_occurrence_index(enumerate(cls))
    for d in (1, -1, 2, -2, 3, -3, 4, -4):
        assert occ[d] == [k for k, c in enumerate(cls) if d in c]


def test_check_rat_examples(kernel):
    assert _rat(kernel, [(2, 3)], (1,), 1) == []
    assert _rat(kernel, [(-1, 2), (2,)], (1,), 1) is not None
    assert _rat(kernel, [(-1, 2)], (1,), 1) is None


def test_check_rat_tries_other_pivots(kernel):
    # pivot 1 fails against (-1, 2); pivot 3 is vacuous
    assert _rat(kernel, [(-1, 2)], (1, 3), 1) is not None


def test_check_rat_skips_tautological_resolvents(kernel):
    assert _rat(kernel, [(-1, -2)], (1, 2), 1) == []


clause_st = st.lists(st.integers(-5, 5).filter(bool), min_size=1, max_size=3, unique_by=abs)


@given(st.lists(clause_st, max_size=10), clause_st)
@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_rat_generalizes_rup_and_matches_oracle(kernel, F, c):
    F = [tuple(x) for x in F]
    c = tuple(c)
    rup = check_rup(_state(kernel, F), c)
    got = _rat(kernel, F, c, c[0])
    if rup:
        assert got is not None
    assert (got is not None or bool(rup)) == is_rat(F, c)


BLOCK = ["5 -1 -2 0", "-5 1 0", "-5 2 0"]


def test_match_equivalence_block():
    s = make_session([(1, 3), (2, 4)], BLOCK + ["0"])
    b = match_equivalence_block(s, 1)
    assert b.pivot == 5 and b.n == 2 and b.indices == [1, 2, 3]
    assert verify_equivalence_block(b)


def test_match_requires_fresh_pivot():
    s = make_session([(1, 5), (2, 4)], BLOCK + ["0"])
    assert match_equivalence_block(s, 1) is None


def test_match_rejects_incomplete_or_reordered():
    assert match_equivalence_block(make_session([(1, 2)], ["5 -1 -2 0", "-5 2 0", "-5 1 0", "0"]), 1) is None
    assert match_equivalence_block(make_session([(1, 2)], ["5 -1 -2 0", "-5 1 0", "0"]), 1) is None


def test_match_rejects_deleted_definition():
    s = make_session([(1, 2)], ["5 -1 -2 0", "-5 1 0", "d -1 -2 5 0", "-5 2 0", "0"])
    assert match_equivalence_block(s, 1) is None


def test_verify_block_containment():
    assert not verify_equivalence_block(EquivalenceBlock((-2, -1, 5), [(-5, 3)], 5, 1))
    assert verify_equivalence_block(EquivalenceBlock((-2, -1, 5), [(1, -5), (2, -5)], 5, 1))


def test_fastpath_agrees_with_rat_on_blocks(kernel):
    f = gen_pigeonhole(3)
    for bv in ([1], [1, 5], [2, 6, 10]):
        lines = split_proof_lines(f, bv)
        fast, fs = verify(f, proof_from_lines(lines))
        slow, ss = verify(f, proof_from_lines(lines), Config(fastpath=False))
        assert fast.verified and slow.verified
        assert fs.rat_checks == 0 and fs.occurrence_builds == 0
        assert fs.fastpath_blocks == 2 ** len(bv)
        assert ss.rat_checks > 0 and ss.occurrence_builds == 1


def test_fastpath_blocks_pass_rat_in_order(kernel):
    # every clause of an accepted block is RAT on its written pivot
    lines = BLOCK
    cls = [(1, 3), (2, 4)]
    for n, line in enumerate(lines):
        c = tuple(int(t) for t in line.split()[:-1])
        prior = cls + [tuple(int(t) for t in l.split()[:-1]) for l in lines[:n]]
        assert _rat(kernel, prior, c, c[0]) is not None


def test_broken_block_falls_back_to_rat(kernel):
    f = gen_pigeonhole(2)
    lines = split_proof_lines(f, [1])
    # corrupt the first unit so the containment rule fails
    z = int(lines[0].split()[0])
    lines[1] = f"{-z} 3 0"
    v, s = verify(f, proof_from_lines(lines))
    assert s.fastpath_blocks == 1
