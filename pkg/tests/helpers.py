from winrat.clauses import Formula
from winrat.proof_io import proof_from_lines
from winrat.session import Config, ForwardContext, Session


def lines_of(clauses):
    return [" ".join(map(str, list(c) + [0])) for c in clauses]


def make_session(clauses, proof, cfg=None, budget=None, num_vars=None):
    n = max([abs(d) for c in clauses for d in c] + [num_vars or 0])
    f = Formula(n, [tuple(sorted(set(c), key=lambda d: (abs(d), d < 0))) for c in clauses])
    db = proof_from_lines(proof if proof and isinstance(proof[0], str) else lines_of(proof), budget)
    return Session(f, db, cfg or Config())


def forward(session):
    return ForwardContext(session)
