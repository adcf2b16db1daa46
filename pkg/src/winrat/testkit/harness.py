"""Permutation and mutation harnesses, and the paired .cnf/.drat corpus."""

from __future__ import annotations

import random
from pathlib import Path

from winrat.driver import verify
from winrat.proof_io import proof_from_lines
from winrat.testkit.generators import gen_pigeonhole, gen_random_ksat, gen_random_mixed
from winrat.testkit.oracle import exhaustive_sat, model_set
from winrat.testkit.solver import Sat, proof_lines


def _lines_of(clauses):
    return [" ".join(map(str, list(c) + [0])) for c in clauses]


def lemma1_permutation_check(formula, inferences, seed=0, permutations=100, cfg=None):
    """Reordering implied inferences keeps the model set; accepted ⇒ UNSAT.

    ``inferences`` are clauses each implied by ``formula``. For every random
    order the model set of F plus the inferences is compared with that of F,
    and the permuted sequence followed by the empty clause is given to the
    driver; acceptance must only happen for an unsatisfiable formula.
    Returns True when all permutations pass.
    """
    rng = random.Random(seed)
    base = model_set(formula.clauses, formula.num_vars)
    unsat = not base
    seq = [tuple(c) for c in inferences]
    for n in range(permutations):
        order = list(seq)
        if n:
            rng.shuffle(order)
        if model_set(list(formula.clauses) + order, formula.num_vars) != base:
            return False
        verdict, _ = verify(formula, proof_from_lines(_lines_of(order) + ["0"]), cfg)
        if verdict.verified and not unsat:
            return False
    return True


def mutate_proof(lines, rng, num_vars):
    """One random mutation: flip a literal, drop a step, drop the empty
    clause, insert a random clause, or delete an input-looking clause."""
    lines = list(lines)
    adds = [n for n, l in enumerate(lines) if not l.startswith("d")]
    kind = rng.choice(["flip", "drop", "drop_empty", "insert", "swap"])
    if kind == "flip" and adds:
        n = rng.choice(adds)
        toks = lines[n].split()[:-1]
        if toks:
            k = rng.randrange(len(toks))
            toks[k] = str(-int(toks[k]))
            lines[n] = " ".join(toks + ["0"])
            return lines, kind
        kind = "insert"
    if kind == "drop" and len(lines) > 1:
        del lines[rng.randrange(len(lines) - 1)]
        return lines, kind
    if kind == "drop_empty":
        return [l for l in lines if l.strip() != "0"], kind
    if kind == "swap" and len(lines) > 1:
        a, b = rng.sample(range(len(lines)), 2)
        lines[a], lines[b] = lines[b], lines[a]
        return lines, kind
    size = rng.randint(1, 3)
    vs = rng.sample(range(1, num_vars + 1), min(size, num_vars))
    clause = [v if rng.random() < 0.5 else -v for v in vs]
    lines.insert(rng.randrange(len(lines) + 1), " ".join(map(str, clause + [0])))
    return lines, "insert"


def garbage_proof(rng, num_vars, steps=6):
    """Random clauses followed by the empty clause."""
    out = []
    for _ in range(steps):
        vs = rng.sample(range(1, num_vars + 1), min(rng.randint(1, 3), num_vars))
        out.append(" ".join(str(v if rng.random() < 0.5 else -v) for v in vs) + " 0")
    out.append("0")
    return out


def unsat_corpus(random_count=12, seed=7):
    """(name, formula, proof lines) for the UNSAT corpus formulas."""
    out = []
    for h in (1, 2, 3, 4):
        f = gen_pigeonhole(h)
        out.append((f"php{h + 1}_{h}", f, proof_lines(f)))
    rng = random.Random(seed)
    while len(out) < 4 + random_count:
        f = gen_random_mixed(rng.randrange(1 << 30), 8, 14)
        if exhaustive_sat(f.clauses, f.num_vars) is not None:
            continue
        res = proof_lines(f, delete_every=rng.choice([0, 4]))
        out.append((f"rand{len(out)}", f, res))
    return out


def write_corpus(directory, corpus=None) -> list[Path]:
    """Write paired .cnf/.drat files; returns the .cnf paths."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, f, lines in corpus or unsat_corpus():
        cnf = d / f"{name}.cnf"
        cnf.write_text(f.to_dimacs())
        (d / f"{name}.drat").write_text("".join(l + "\n" for l in lines))
        paths.append(cnf)
    return paths


__all__ = [
    "Sat",
    "garbage_proof",
    "gen_random_ksat",
    "lemma1_permutation_check",
    "mutate_proof",
    "unsat_corpus",
    "write_corpus",
]
