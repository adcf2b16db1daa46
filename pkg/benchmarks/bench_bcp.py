"""Compare the compiled and pure-Python propagation kernels.

Two workloads: raw RUP-style probes (save, assume, propagate, rollback) on a
random 3-CNF, and end-to-end ``verify`` on a CDCL proof of a pigeonhole
formula.

    python3 benchmarks/bench_bcp.py [--vars 300] [--probes 20000] [--holes 6]
"""

import argparse
import random
import time

from winrat import session
from winrat.driver import verify
from winrat.proof_io import proof_from_lines
from winrat.propagation import kernels
from winrat.testkit.generators import gen_pigeonhole, gen_random_ksat
from winrat.testkit.solver import proof_lines


def probe_workload(State, formula, probes, seed):
    rng = random.Random(seed)
    s = State(formula.num_vars)
    for k, c in enumerate(formula.clauses):
        s.attach(k, c)
    s.propagate()
    conflicts = 0
    t0 = time.perf_counter()
    for _ in range(probes):
        s.save()
        for v in rng.sample(range(1, formula.num_vars + 1), 3):
            if not s.assume(v if rng.random() < 0.5 else -v):
                break
        conflicts += s.propagate() >= 0
        s.rollback()
    return time.perf_counter() - t0, conflicts, s.propagations


def verify_workload(State, formula, lines, repeats=3):
    old = session.PropagationState
    session.PropagationState = State
    try:
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            v, stats = verify(formula, proof_from_lines(lines))
            best = min(best, time.perf_counter() - t0)
        return best, v.status, stats.propagations
    finally:
        session.PropagationState = old


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--vars", type=int, default=300)
    ap.add_argument("--probes", type=int, default=20000)
    ap.add_argument("--holes", type=int, default=6)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    ks = kernels()
    f = gen_random_ksat(args.vars, int(args.vars * 4.0), 3, args.seed)
    php = gen_pigeonhole(args.holes)
    lines = proof_lines(php)
    print(f"probe workload: {args.vars} vars, {len(f.clauses)} clauses, {args.probes} probes")
    probe = {name: probe_workload(State, f, args.probes, args.seed) for name, State in ks.items()}
    for name, (t, conflicts, props) in probe.items():
        print(f"  {name:7s} {t:8.3f}s  conflicts={conflicts}  propagations={props}")
    print(f"verify workload: PHP({args.holes + 1},{args.holes}), {len(lines)} proof lines")
    ver = {name: verify_workload(State, php, lines) for name, State in ks.items()}
    for name, (t, status, props) in ver.items():
        print(f"  {name:7s} {t:8.3f}s  {status}  propagations={props}")
    if "cython" in ks:
        print(f"speedup probe  {probe['python'][0] / probe['cython'][0]:.1f}x")
        print(f"speedup verify {ver['python'][0] / ver['cython'][0]:.1f}x")


if __name__ == "__main__":
    main()
