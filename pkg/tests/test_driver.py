import itertools
import random

from helpers import make_session
from winrat.clauses import Formula
from winrat.driver import flag_vectors, locate_empty_clause, seed_used_flags, verify
from winrat.proof_io import proof_from_lines
from winrat.session import INF, Config, DeletionTable
from winrat.testkit.generators import gen_pigeonhole, gen_random_mixed
from winrat.testkit.oracle import exhaustive_sat
from winrat.testkit.solver import Sat, proof_lines


def run(clauses, lines, cfg=None, n=None):
    n = n or max(abs(d) for c in clauses for d in c)
    return verify(Formula(n, clauses), proof_from_lines(lines), cfg)


def test_contradictory_input(kernel):
    assert run([(1,), (-1,)], ["0"])[0].verified


def test_unimplied_unit_rejected(kernel):
    v, _ = run([(1, 2)], ["1 0", "0"])
    assert not v.verified and v.reason == "no global conflict"


def test_failing_index_reported(kernel):
    v, _ = run([(1, 2), (-1, 2), (1, -2)], ["-2 0", "0"])
    assert not v.verified and v.failing_index == 1


def test_php43_verified(kernel):
    f = gen_pigeonhole(3)
    assert verify(f, proof_from_lines(proof_lines(f)))[0].verified


def test_no_empty_clause():
    assert not run([(1,), (-1,)], ["1 0"])[0].verified


def test_locate_empty_clause():
    assert locate_empty_clause(proof_from_lines(["1 0", "0", "2 0"])) == 2
    assert locate_empty_clause(proof_from_lines(["1 0"])) is None
    assert locate_empty_clause(proof_from_lines(["0"])) == 1


def test_steps_after_empty_ignored(kernel):
    v, _ = run([(1,), (-1,)], ["0", "5 0"])
    assert v.verified


def test_seed_used_flags(kernel):
    # ∅ itself is left out of the seed propagation, else the check is vacuous
    s = make_session([(1,), (-1, 2)], ["3 0", "0"])
    assert not seed_used_flags(s)
    s = make_session([(1,), (-1, 2), (-2,)], ["3 0", "0"])
    assert seed_used_flags(s)
    assert s.record(2).used and s.record(2).verified
    assert not s.record(1).used


def test_seed_cone_matches_graph(kernel):
    # the cone of the conflict at ∅ holds exactly the inferences on the path
    s = make_session([(-1, 2), (-2, 3)], ["1 0", "-3 0", "4 0", "0"])
    assert seed_used_flags(s)
    assert [s.record(k).used for k in range(1, 5)] == [True, True, False, True]


def test_deletions_are_honored(kernel):
    # [1] is RUP only while (1, 2) and (1, -2) are both live
    cls = [(1, 2), (1, -2), (-1, 3), (-1, -3)]
    assert run(cls, ["1 0", "0"])[0].verified
    v, _ = run(cls, ["d 1 -2 0", "1 0", "0"])
    assert not v.verified


def test_missing_deletion_is_warning(kernel, caplog):
    v, s = run([(1,), (-1,)], ["d 7 8 0", "0"], n=8)
    assert v.verified and s.missing_deletions == 1
    assert "not present" in caplog.text


def test_duplicate_inference_trivially_rup(kernel):
    assert run([(1, 2), (-1,), (-2,)], ["1 2 0", "0"])[0].verified


def test_stage_switches_and_theta_on_random(kernel):
    rng = random.Random(3)
    names = ["probe", "subset", "window", "deactivate", "prune", "fastpath"]
    for seed in range(6):
        f = gen_random_mixed(seed * 7 + 1)
        if exhaustive_sat(f.clauses, f.num_vars) is not None:
            continue
        lines = proof_lines(f, delete_every=3)
        base = verify(f, proof_from_lines(lines))[0].verified
        for theta in (1, 8, INF):
            bits = [rng.random() < 0.5 for _ in names]
            cfg = Config(theta=theta, prune_cap=rng.choice([0, 2, INF]), **dict(zip(names, bits)))
            assert verify(f, proof_from_lines(lines), cfg)[0].verified == base


def test_determinism(kernel):
    f = gen_pigeonhole(3)
    lines = proof_lines(f)
    a = proof_from_lines(lines)
    b = proof_from_lines(lines)
    assert verify(f, a)[0] == verify(f, b)[0]
    assert flag_vectors(a) == flag_vectors(b)


def test_rerun_resets_flags(kernel):
    f = gen_pigeonhole(2)
    db = proof_from_lines(proof_lines(f))
    verify(f, db)
    first = flag_vectors(db)
    verify(f, db)
    assert flag_vectors(db) == first


def test_verified_implies_used_verified(kernel):
    for seed in range(10):
        f = gen_random_mixed(seed)
        lines = proof_lines(f)
        if isinstance(lines, Sat):
            continue
        db = proof_from_lines(lines)
        v, _ = verify(f, db)
        assert v.verified
        assert all(r.verified for r in db.inferences[: db.empty_at] if r.used)


def test_deletion_table_collision():
    t = DeletionTable(bits=1)
    a, b = (1, 2, 3), (4, 5, 6)
    t.add(a, 10, h=99)
    t.add(b, 11, h=99)
    assert t.remove(b, h=99) == 11
    assert t.remove(b, h=99) is None
    assert t.remove(a, h=99) == 10
    assert len(t) == 0


def test_deletion_table_latest_copy_first():
    t = DeletionTable()
    t.add((1, 2), 0)
    t.add((1, 2), 5)
    assert t.remove((1, 2)) == 5
    assert t.remove((1, 2)) == 0


def test_deletion_table_grows():
    t = DeletionTable(bits=1)
    cls = [tuple(sorted({k, k + 1})) for k in range(1, 200)]
    for k, c in enumerate(cls):
        t.add(c, k)
    for k, c in itertools.islice(enumerate(cls), 0, None, 3):
        assert t.remove(c) == k
