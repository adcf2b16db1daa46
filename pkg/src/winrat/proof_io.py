"""DIMACS CNF and ASCII DRAT/DRUP reading, and the proof database.

A proof is read in one streaming pass. Every step keeps its byte offset, so
an inference whose body was evicted under the memory budget can be parsed
again from the file on demand.
"""

from __future__ import annotations

import io
import logging
import os
from dataclasses import dataclass, field

from winrat.clauses import Formula, clause_hash, sort_clause

logger = logging.getLogger(__name__)

ADD = "add"
DELETE = "delete"


class ParseError(ValueError):
    def __init__(self, msg, line=None, offset=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"byte {offset}")
        super().__init__(f"{msg} ({', '.join(where)})" if where else msg)
        self.line = line
        self.offset = offset


class IntegrityError(RuntimeError):
    pass


def _open_binary(source):
    """Return (stream, owned) for a path, bytes, str payload or binary stream."""
    if isinstance(source, (bytes, bytearray)):
        return io.BytesIO(bytes(source)), True
    if isinstance(source, (str, os.PathLike)):
        return open(source, "rb"), True
    return source, False


# -- DIMACS -------------------------------------------------------------


def parse_dimacs(source, strict=False) -> Formula:
    """Read a DIMACS CNF formula.

    Clauses may span lines. A clause count that disagrees with the header
    only logs a warning. With ``strict`` a variable above the declared count
    is an error; otherwise ``num_vars`` grows to fit.
    """
    stream, owned = _open_binary(source)
    try:
        return _parse_dimacs(stream, strict)
    finally:
        if owned:
            stream.close()


def _parse_dimacs(stream, strict):
    header = None
    clauses = []
    current = []
    max_var = 0
    lineno = 0
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith(b"c"):
            continue
        if line.startswith(b"%"):
            break
        if line.startswith(b"p"):
            parts = line.split()
            if header is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != b"cnf":
                raise ParseError(f"malformed header {line.decode(errors='replace')!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError("non-integer header field", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise ParseError("negative header field", lineno)
            continue
        if header is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                d = int(tok)
            except ValueError:
                raise ParseError(f"non-integer token {tok.decode(errors='replace')!r}", lineno) from None
            if d == 0:
                clauses.append(sort_clause(current))
                current = []
                continue
            v = abs(d)
            if v > header[0] and strict:
                raise ParseError(f"variable {v} exceeds declared {header[0]}", lineno)
            if v > max_var:
                max_var = v
            current.append(d)
    if header is None:
        raise ParseError("missing 'p cnf' header", lineno)
    if current:
        raise ParseError("unterminated final clause", lineno)
    if len(clauses) != header[1]:
        logger.warning("header declares %d clauses, found %d", header[1], len(clauses))
    return Formula(max(header[0], max_var), clauses)


def write_cnf(formula: Formula, path) -> None:
    with open(path, "w") as f:
        f.write(formula.to_dimacs())


# -- proof steps ----------------------------------------------------------


@dataclass
class ProofStep:
    kind: str
    clause: tuple | None
    offset: int = 0
    pivot: int = 0
    inference: int = 0  # 1-based index of the inference for ADD steps

    @property
    def is_add(self) -> bool:
        return self.kind == ADD


def parse_proof_line(line, offset=0):
    """Parse one ASCII DRAT line into a ProofStep, or None for comments/blanks.

    ``pivot`` is the first literal as written, before normalization; a RAT
    check tries it first.
    """
    if isinstance(line, str):
        line = line.encode()
    toks = line.split()
    if not toks or toks[0].startswith(b"c"):
        return None
    kind = ADD
    if toks[0] == b"d":
        kind = DELETE
        toks = toks[1:]
    lits = []
    for n, tok in enumerate(toks):
        try:
            d = int(tok)
        except ValueError:
            raise ParseError(f"non-integer token {tok.decode(errors='replace')!r}", offset=offset) from None
        if d == 0:
            if n != len(toks) - 1:
                raise ParseError("tokens after clause terminator", offset=offset)
            return ProofStep(kind, sort_clause(lits), offset, lits[0] if lits else 0)
        lits.append(d)
    raise ParseError("missing 0 terminator", offset=offset)


def format_step(step: ProofStep, clause=None) -> str:
    lits = clause if clause is not None else step.clause
    # keep the pivot first so a rewrite preserves the RAT convention
    if step.pivot and step.pivot in lits:
        lits = [step.pivot] + [d for d in lits if d != step.pivot]
    body = " ".join(str(d) for d in lits)
    prefix = "d " if step.kind == DELETE else ""
    return f"{prefix}{body} 0" if body else f"{prefix}0"


# -- proof database -------------------------------------------------------


@dataclass
class InferenceRecord:
    clause: tuple | None
    size: int
    hash: int
    offset: int
    step: int
    pivot: int = 0
    verified: bool = False
    used: bool = False
    active: bool = True

    @property
    def evicted(self) -> bool:
        return self.clause is None


@dataclass
class ProofDB:
    """Ordered proof steps and the inference records I_1..I_m.

    Inference indices in this API are 1-based. ``budget`` caps the number of
    resident inference bodies outside the pinned (active) set; None means
    unlimited.
    """

    steps: list = field(default_factory=list)
    inferences: list = field(default_factory=list)
    empty_at: int | None = None
    budget: int | None = None
    stream: object = None
    reloads: int = 0
    evictions: int = 0
    max_var: int = 0
    _pinned: set = field(default_factory=set)
    _resident: int = 0

    def __len__(self) -> int:
        return len(self.inferences)

    def record(self, k: int) -> InferenceRecord:
        if k < 1:
            raise IndexError(k)
        return self.inferences[k - 1]

    @property
    def resident_count(self) -> int:
        return self._resident

    @property
    def pinned_count(self) -> int:
        return len(self._pinned)

    def _read_at(self, k: int) -> tuple:
        rec = self.inferences[k - 1]
        if self.stream is None:
            raise IntegrityError(f"inference {k} evicted and no proof stream to reload from")
        self.stream.seek(rec.offset)
        line = self.stream.readline()
        try:
            step = parse_proof_line(line, rec.offset)
        except ParseError as e:
            raise IntegrityError(f"inference {k} no longer parses: {e}") from None
        if step is None or step.kind != ADD or len(step.clause) != rec.size or clause_hash(step.clause) != rec.hash:
            raise IntegrityError(f"inference {k} at byte {rec.offset} changed on disk")
        self.reloads += 1
        return step.clause

    def clause(self, k: int) -> tuple:
        """Body of I_k; an evicted body is re-read without becoming resident."""
        rec = self.inferences[k - 1]
        if rec.clause is not None:
            return rec.clause
        return self._read_at(k)

    def pin(self, k: int) -> tuple:
        """Make I_k resident and count it as active."""
        c = reload_inference(self, k)
        self._pinned.add(k)
        return c

    def unpin(self, k: int) -> None:
        self._pinned.discard(k)
        if self.budget is not None and self._resident > self.budget + len(self._pinned):
            self.evict(k)

    def evict(self, k: int) -> None:
        rec = self.inferences[k - 1]
        if rec.clause is None or k in self._pinned:
            return
        if self.stream is None:
            return
        rec.clause = None
        self.steps[rec.step].clause = None
        self._resident -= 1
        self.evictions += 1

    def close(self) -> None:
        if self.stream is not None:
            self.stream.close()
            self.stream = None

    def step_clause(self, step: ProofStep) -> tuple:
        if step.kind == ADD:
            return self.clause(step.inference)
        return step.clause

    def serialize(self) -> bytes:
        out = []
        for s in self.steps:
            out.append(format_step(s, self.step_clause(s)))
        return ("\n".join(out) + "\n").encode() if out else b""


def reload_inference(db: ProofDB, k: int) -> tuple:
    """Bring an evicted I_k back into memory from its file offset."""
    rec = db.inferences[k - 1]
    if rec.clause is not None:
        return rec.clause
    rec.clause = db._read_at(k)
    db.steps[rec.step].clause = rec.clause
    db._resident += 1
    return rec.clause


def load_proof(source, budget=None) -> ProofDB:
    """Read an ASCII DRAT/DRUP proof in one pass.

    The first ``budget`` inference bodies stay in memory; later ones keep only
    size, hash and offset. A path or stream stays open on the returned
    ProofDB for reloads; call ``close`` when done.
    """
    stream, _ = _open_binary(source)
    db = ProofDB(budget=budget, stream=stream)
    offset = stream.tell()
    for raw in iter(stream.readline, b""):
        step = parse_proof_line(raw, offset)
        here = offset
        offset += len(raw)
        if step is None:
            continue
        c = step.clause
        if c:
            db.max_var = max(db.max_var, max(abs(d) for d in c))
        if step.kind == DELETE:
            db.steps.append(step)
            continue
        k = len(db.inferences) + 1
        resident = budget is None or db._resident < budget
        rec = InferenceRecord(
            clause=c if resident else None,
            size=len(c),
            hash=clause_hash(c),
            offset=here,
            step=len(db.steps),
            pivot=step.pivot,
        )
        if resident:
            db._resident += 1
        else:
            db.evictions += 1
        db.inferences.append(rec)
        db.steps.append(ProofStep(ADD, c if resident else None, here, step.pivot, k))
        if db.empty_at is None and len(c) == 0:
            db.empty_at = k
    return db


def proof_from_lines(lines, budget=None) -> ProofDB:
    """Build a ProofDB from proof text lines held in memory."""
    data = "".join(f"{l}\n" for l in lines).encode()
    return load_proof(io.BytesIO(data), budget)
