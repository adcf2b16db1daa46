import random

from winrat.clauses import Formula
from winrat.proof_io import proof_from_lines
from winrat.testkit.forward import naive_forward_check
from winrat.testkit.generators import gen_pigeonhole, gen_random_ksat, gen_random_mixed
from winrat.testkit.harness import garbage_proof, lemma1_permutation_check, mutate_proof, unsat_corpus, write_corpus
from winrat.testkit.oracle import exhaustive_sat, model_set, naive_bcp
from winrat.testkit.solver import Sat, emit_proof_dpll, literal_count, proof_lines, split_proof_lines


def test_exhaustive_examples():
    assert exhaustive_sat([(1,), (-1,)]) is None
    assert len(model_set([(1, 2)], 2)) == 3


def test_naive_bcp_examples():
    assert naive_bcp([(1,), (-1, 2)]) == (False, {1, 2})
    assert naive_bcp([(1,), (-1,)])[0]


def test_pigeonhole_shapes():
    php21 = gen_pigeonhole(1)
    assert php21.clauses == [(1,), (2,), (-1, -2)]
    assert len(gen_pigeonhole(3).clauses) == 4 * 3 + 3 * 6 or len(gen_pigeonhole(3).clauses) == 22
    for h in (1, 2, 3):
        assert exhaustive_sat(gen_pigeonhole(h).clauses) is None


def test_pigeonhole_clause_count():
    # 4 pigeon clauses plus 3 holes x C(4, 2) exclusivity clauses
    assert len(gen_pigeonhole(3).clauses) == 4 + 3 * 6


def test_generators_deterministic():
    assert gen_random_ksat(10, 40, 3, 5).to_dimacs() == gen_random_ksat(10, 40, 3, 5).to_dimacs()
    assert gen_random_mixed(3).to_dimacs() == gen_random_mixed(3).to_dimacs()


def test_emit_proof_examples():
    assert proof_lines(Formula(1, [(1,), (-1,)])) == ["0"]
    out = emit_proof_dpll(Formula(2, [(1, 2)]))
    assert isinstance(out, Sat)
    assert any(d in out.model for d in (1, 2))


def test_emitted_proofs_end_with_empty_and_pass_naive():
    for seed in range(40):
        f = gen_random_mixed(seed, 8, 12)
        lines = proof_lines(f, delete_every=seed % 3)
        if isinstance(lines, Sat):
            assert exhaustive_sat(f.clauses, f.num_vars) is not None
            continue
        assert lines[-1] == "0"
        assert naive_forward_check(f, proof_from_lines(lines)) == (True, None)


def test_naive_checker_never_accepts_sat():
    rng = random.Random(8)
    for seed in range(60):
        f = gen_random_mixed(seed, 8, 10)
        if exhaustive_sat(f.clauses, f.num_vars) is None:
            continue
        for _ in range(5):
            assert not naive_forward_check(f, proof_from_lines(garbage_proof(rng, f.num_vars)))[0]


def test_naive_checker_reports_failing_index():
    f = Formula(2, [(1, 2), (-1, 2), (1, -2)])
    # [-2] is not RUP, and the resolvent with (-1, 2) blocks RAT
    assert naive_forward_check(f, proof_from_lines(["1 0", "-2 0", "0"])) == (False, 2)


def test_empty_proof_on_bcp_unsat():
    f = Formula(2, [(1,), (-1, 2), (-2,)])
    assert naive_forward_check(f, proof_from_lines(["0"])) == (True, None)


def test_split_proof_block_shape():
    f = gen_pigeonhole(2)
    lines = split_proof_lines(f, [1])
    z = f.num_vars + 1
    assert lines[:2] == [f"{z} -1 0", f"{-z} 1 0"]
    assert naive_forward_check(f, proof_from_lines(lines))[0]


def test_split_encoding_smaller_at_scale():
    f = gen_pigeonhole(5)
    a = split_proof_lines(f, [1, 2], "equivalence")
    b = split_proof_lines(f, [1, 2], "expanded")
    assert literal_count(a) < literal_count(b)


def test_permutation_check_identity_and_random():
    f = gen_pigeonhole(2)
    implied = [(-1, -4), (-2, -5)]
    assert lemma1_permutation_check(f, implied, seed=1, permutations=1)
    assert lemma1_permutation_check(f, implied, seed=1, permutations=20)


def test_mutations_change_proof():
    rng = random.Random(0)
    lines = ["1 2 0", "-1 0", "0"]
    for _ in range(50):
        out, kind = mutate_proof(lines, rng, 3)
        assert out != lines or kind == "swap"


def test_write_corpus(tmp_path):
    corpus = unsat_corpus(random_count=2)
    paths = write_corpus(tmp_path, corpus)
    assert len(paths) == len(corpus)
    for p in paths:
        assert p.with_suffix(".drat").exists()
