"""Boolean constraint propagation over two watched literals.

The kernel is the compiled ``winrat._bcp`` extension when it is built, else
the pure-Python ``winrat._bcp_py``. Set ``WINRAT_PURE_PYTHON=1`` to force the
fallback. Both expose the same ``PropagationState`` class; the functions here
are the operation-level wrappers the checker stages use.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from winrat import _bcp_py

NO_CONFLICT = _bcp_py.NO_CONFLICT
LITERAL_CONFLICT = _bcp_py.LITERAL_CONFLICT

PythonPropagationState = _bcp_py.PropagationState

try:
    from winrat._bcp import PropagationState as CythonPropagationState
except ImportError:  # extension not built
    CythonPropagationState = None

if CythonPropagationState is not None and not os.environ.get("WINRAT_PURE_PYTHON"):
    PropagationState = CythonPropagationState
else:
    PropagationState = PythonPropagationState

KERNEL = PropagationState.kernel


def kernels() -> dict:
    """Available kernel classes keyed by name."""
    out = {"python": PythonPropagationState}
    if CythonPropagationState is not None:
        out["cython"] = CythonPropagationState
    return out


@dataclass(frozen=True)
class PropagationOutcome:
    conflict: bool
    conflict_clause: int = NO_CONFLICT

    @property
    def kind(self) -> str:
        return "conflict" if self.conflict else "fixpoint"


def attach(state, cref: int, lits) -> None:
    state.attach(cref, lits)


def detach(state, cref: int) -> None:
    state.detach(cref)


def assume(state, lit: int) -> bool:
    return state.assume(lit)


def propagate(state) -> PropagationOutcome:
    c = state.propagate()
    return PropagationOutcome(c != NO_CONFLICT, c)


def is_unit_in_bcp(state, lits) -> int | None:
    """The literal a clause is unit on under the current trail, if any.

    A clause counts as unit when exactly ``len - 1`` literals are false; a
    fully falsified clause is a conflict clause, not a unit. Single-literal
    clauses are units unless falsified.
    """
    x = state.unit_literal(lits)
    return x or None


def is_conflict_in_bcp(state, lits) -> bool:
    return state.count_non_false(lits) == 0


def mark_used_antecedents(state) -> list[int]:
    """Crefs of the conflict clause and every reason behind it."""
    return state.analyze()


def save_point(state) -> None:
    state.save()


def rollback(state) -> None:
    state.rollback()
