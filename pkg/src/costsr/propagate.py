"""Unit propagation and the unit-propagation entailment relation.

Two implementations live here.  :func:`unit_propagate` follows the textbook
loop on a clause multiset and returns the residual formula; it is the
reference.  :class:`ClauseDatabase` is the incremental two-watched-literal
engine the proof checker uses, answering many entailment queries against a
growing database with per-query assumptions and a private trail.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .model import (
    SATISFIED,
    Clause,
    Formula,
    Substitution,
    negation_of,
    restrict_clause,
    restrict_formula,
)


class Status(enum.Enum):
    FIXPOINT = "fixpoint"
    CONFLICT = "conflict"


@dataclass(frozen=True)
class PropagationResult:
    status: Status
    implied_units: frozenset[int]
    residual: Formula

    @property
    def conflict(self) -> bool:
        return self.status is Status.CONFLICT


def unit_propagate(formula: Formula, order=None) -> PropagationResult:
    """Run unit propagation to a fixpoint.

    ``order`` optionally picks which pending unit to process next (a callable
    taking the sorted list of pending unit literals); the outcome does not
    depend on it.
    """
    clauses: list[Clause] = list(formula)
    units: set[int] = set()
    while True:
        if any(c.is_empty for c in clauses):
            return PropagationResult(Status.CONFLICT, frozenset(units), Formula(clauses))
        pending = sorted({c[0] for c in clauses if len(c) == 1})
        if not pending:
            return PropagationResult(Status.FIXPOINT, frozenset(units), Formula(clauses))
        lit = order(pending) if order else pending[0]
        units.add(lit)
        rho = Substitution.from_literals([lit])
        nxt = []
        for c in clauses:
            img = restrict_clause(c, rho)
            if img is not SATISFIED:
                nxt.append(img)
        clauses = nxt


def derives_by_up(formula: Formula, clause: Clause) -> bool:
    """``formula ⊢₁ clause`` by the reference propagation loop."""
    if clause.is_tautology:
        return True
    return unit_propagate(restrict_formula(formula, negation_of(clause))).conflict


def derives_all(formula: Formula, delta: Iterable[Clause]) -> tuple[bool, Clause | None]:
    """``formula ⊢₁ delta``; returns ``(ok, first_failing_clause)``."""
    db = ClauseDatabase(formula)
    for d in delta:
        if not db.derives(d):
            return False, d
    return True, None


class ClauseDatabase:
    """Append-only clause store with two-watched-literal propagation.

    Watches survive across queries: every query starts and ends with an
    empty trail, and any pair of watched literals is valid when nothing is
    assigned.  Multiplicity is tracked for bookkeeping but ignored by
    propagation.
    """

    def __init__(self, clauses: Iterable[Clause] = ()):
        self.clauses: list[Clause] = []
        self._watched: list[list[int]] = []
        self._watches: dict[int, list[int]] = defaultdict(list)
        self._occurs: dict[int, list[int]] = defaultdict(list)
        self._index: dict[Clause, int] = {}
        self._counts: dict[Clause, int] = defaultdict(int)
        self.units: set[int] = set()
        self.has_empty = False
        self._value: dict[int, bool] = {}
        for c in clauses:
            self.add(c)

    def __len__(self) -> int:
        return len(self.clauses)

    def __contains__(self, clause: Clause) -> bool:
        return clause in self._index

    def __iter__(self):
        return iter(self.clauses)

    def add(self, clause: Clause) -> None:
        self._counts[clause] += 1
        if clause in self._index:
            return
        idx = len(self.clauses)
        self.clauses.append(clause)
        self._index[clause] = idx
        for v in clause.variables:
            self._occurs[v].append(idx)
        if clause.is_tautology:
            self._watched.append([])
            return
        lits = list(clause)
        self._watched.append(lits)
        if not lits:
            self.has_empty = True
        elif len(lits) == 1:
            self.units.add(lits[0])
        else:
            self._watches[lits[0]].append(idx)
            self._watches[lits[1]].append(idx)

    def to_formula(self) -> Formula:
        return Formula.from_counts(self._counts)

    def occurrences(self, v: int) -> list[int]:
        return self._occurs.get(v, [])

    def propagate(self, assumptions: Iterable[int]) -> tuple[bool, list[int]]:
        """Propagate the database under ``assumptions``.

        Returns ``(conflict, trail)``; the trail lists assumptions and implied
        literals in assignment order.  The engine is left unassigned.
        """
        value = self._value
        trail: list[int] = []
        try:
            if self.has_empty:
                return True, trail

            def assign(lit: int) -> bool:
                v = lit if lit > 0 else -lit
                cur = value.get(v)
                if cur is None:
                    value[v] = lit > 0
                    trail.append(lit)
                    return True
                return cur == (lit > 0)

            for lit in assumptions:
                if not assign(lit):
                    return True, trail
            for lit in self.units:
                if not assign(lit):
                    return True, trail

            watches = self._watches
            watched = self._watched
            head = 0
            while head < len(trail):
                false_lit = -trail[head]
                head += 1
                wl = watches.get(false_lit)
                if not wl:
                    continue
                keep = []
                conflict = False
                i = 0
                n = len(wl)
                while i < n:
                    ci = wl[i]
                    i += 1
                    lits = watched[ci]
                    if lits[0] == false_lit:
                        lits[0], lits[1] = lits[1], lits[0]
                    first = lits[0]
                    fv = value.get(first if first > 0 else -first)
                    if fv is not None and fv == (first > 0):
                        keep.append(ci)
                        continue
                    for k in range(2, len(lits)):
                        lk = lits[k]
                        kv = value.get(lk if lk > 0 else -lk)
                        if kv is None or kv == (lk > 0):
                            lits[1], lits[k] = lk, lits[1]
                            watches[lk].append(ci)
                            break
                    else:
                        keep.append(ci)
                        if fv is None:
                            value[first if first > 0 else -first] = first > 0
                            trail.append(first)
                        else:
                            conflict = True
                            keep.extend(wl[i:])
                            break
                watches[false_lit] = keep
                if conflict:
                    return True, trail
            return False, trail
        finally:
            for lit in trail:
                del value[lit if lit > 0 else -lit]

    def conflicts(self, assumptions: Iterable[int]) -> bool:
        return self.propagate(assumptions)[0]

    def derives(self, clause: Clause) -> bool:
        """``self ⊢₁ clause``."""
        if clause.is_tautology:
            return True
        if clause in self._index:
            return True
        return self.conflicts([-lit for lit in clause])
