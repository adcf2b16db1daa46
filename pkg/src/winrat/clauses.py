"""Literals, clauses and the weighted-sum clause hash.

Clauses are plain tuples of DIMACS integers in normalized order: duplicates
removed, sorted by ``(var, sign)`` with the positive literal first. This is
the same order as :func:`lit_key`, which maps a literal to ``2*var`` or
``2*var + 1`` and is also the literal code used by the propagation kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

HASH_BITS = 64
HASH_MASK = (1 << HASH_BITS) - 1


class _Tautology:
    __slots__ = ()

    def __repr__(self) -> str:
        return "TAUTOLOGY"

    def __reduce__(self):
        return "TAUTOLOGY"


TAUTOLOGY = _Tautology()


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    negative: bool = False

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"variable index must be >= 1, got {self.var}")

    @property
    def positive(self) -> bool:
        return not self.negative

    def complement(self) -> "Literal":
        return Literal(self.var, not self.negative)

    def __invert__(self) -> "Literal":
        return self.complement()

    def to_dimacs(self) -> int:
        return -self.var if self.negative else self.var


def encode_literal(d: int) -> Literal:
    if d == 0:
        raise ValueError("0 terminates a clause and is not a literal")
    return Literal(abs(d), d < 0)


def decode_literal(lit: Literal) -> int:
    return lit.to_dimacs()


def lit_key(d: int) -> int:
    """Injective non-negative key of a DIMACS literal: 2*var, +1 if negative."""
    return (d << 1) if d > 0 else ((-d) << 1) | 1


def key_lit(k: int) -> int:
    v = k >> 1
    return -v if k & 1 else v


def sort_clause(raw) -> tuple[int, ...]:
    """Dedupe and sort; complementary pairs are kept."""
    return tuple(sorted(set(raw), key=lit_key))


def is_tautology(clause) -> bool:
    seen = set(clause)
    return any(-l in seen for l in seen)


def normalize_clause(raw):
    """Return the normalized clause tuple, or TAUTOLOGY for l and -l together."""
    lits = set()
    for d in raw:
        d = int(d)
        if d == 0:
            raise ValueError("0 is not a literal")
        if -d in lits:
            return TAUTOLOGY
        lits.add(d)
    return tuple(sorted(lits, key=lit_key))


def clause_hash(clause) -> int:
    """hash(C) = m + sum(key(l_i) * i) over literals sorted by key, mod 2**64.

    The sum runs over every sorted position i = 1..m. Order of the input does
    not matter since sorting happens here.
    """
    keys = sorted(lit_key(d) for d in clause)
    h = len(keys)
    for i, k in enumerate(keys, 1):
        h += k * i
    return h & HASH_MASK


def negate(clause) -> list[int]:
    return [-d for d in clause]


def clause_vars(clause) -> set[int]:
    return {abs(d) for d in clause}


@dataclass
class Formula:
    num_vars: int
    clauses: list = None

    def __post_init__(self):
        if self.clauses is None:
            self.clauses = []
        else:
            self.clauses = [tuple(c) for c in self.clauses]

    def __len__(self) -> int:
        return len(self.clauses)

    def grow(self, var: int) -> None:
        if var > self.num_vars:
            self.num_vars = var

    def add(self, raw) -> tuple[int, ...]:
        c = sort_clause(raw)
        if c:
            self.grow(max(abs(d) for d in c))
        self.clauses.append(c)
        return c

    def tautologies(self) -> list[int]:
        return [k for k, c in enumerate(self.clauses) if is_tautology(c)]

    def to_dimacs(self) -> str:
        out = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        out.extend(" ".join(map(str, c + (0,))) for c in self.clauses)
        return "\n".join(out) + "\n"
