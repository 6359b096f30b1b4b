"""Ground truth at desk scale: exact cost, optimal assignments, redundancy.

Small instances are enumerated exhaustively with numpy; larger ones go to a
DPLL branch-and-bound that branches on blocking variables last and prunes
on the number of blocking variables already true.  Nothing here shares code
with the proof checker's propagation engine.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .model import FALSE, TRUE, Clause, Formula, Instance, Substitution, var

EXHAUSTIVE_LIMIT = 20
NODE_LIMIT = 5_000_000


class ResourceLimitExceeded(RuntimeError):
    pass


class _Unsatisfiable:
    __slots__ = ()

    def __repr__(self) -> str:
        return "UNSATISFIABLE"

    def __reduce__(self):
        return "UNSATISFIABLE"


UNSATISFIABLE = _Unsatisfiable()


class Method(enum.Enum):
    EXHAUSTIVE = "exhaustive"
    BRANCH_AND_BOUND = "branch-and-bound"


@dataclass(frozen=True)
class CostReport:
    cost: int | _Unsatisfiable
    witness: Substitution | None
    method: Method

    @property
    def satisfiable(self) -> bool:
        return self.cost is not UNSATISFIABLE


class SolutionSpace:
    """All ``2**nvars`` assignments, filtered by the clauses added so far.

    Row ``r`` assigns variable ``v`` the bit ``(r >> (v-1)) & 1``.
    """

    def __init__(self, nvars: int, blocking: Sequence[int] = (), clauses: Iterable[Clause] = (),
                 limit: int = EXHAUSTIVE_LIMIT):
        if nvars > limit:
            raise ResourceLimitExceeded("%d variables exceed the exhaustive limit %d" % (nvars, limit))
        self.nvars = nvars
        self.rows = np.arange(1 << nvars, dtype=np.int64)
        self._cols: dict[int, np.ndarray] = {}
        self.mask = np.ones(len(self.rows), dtype=bool)
        self.costs = np.zeros(len(self.rows), dtype=np.int64)
        for b in blocking:
            self.costs += self.column(b)
        for c in clauses:
            self.add(c)

    def column(self, v: int) -> np.ndarray:
        col = self._cols.get(v)
        if col is None:
            col = ((self.rows >> (v - 1)) & 1).astype(bool)
            self._cols[v] = col
        return col

    def clause_mask(self, clause: Clause) -> np.ndarray:
        out = np.zeros(len(self.rows), dtype=bool)
        for lit in clause:
            col = self.column(var(lit))
            out |= col if lit > 0 else ~col
        return out

    def add(self, clause: Clause) -> None:
        self.mask &= self.clause_mask(clause)

    def min_cost(self, mask: np.ndarray | None = None):
        mask = self.mask if mask is None else mask
        if not mask.any():
            return UNSATISFIABLE
        return int(self.costs[mask].min())

    def optimal_rows(self) -> np.ndarray:
        best = self.min_cost()
        if best is UNSATISFIABLE:
            return self.rows[:0]
        return self.rows[self.mask & (self.costs == best)]

    def satisfying_rows(self) -> np.ndarray:
        return self.rows[self.mask]

    def assignment(self, row: int) -> Substitution:
        return Substitution({v: (TRUE if (row >> (v - 1)) & 1 else FALSE) for v in range(1, self.nvars + 1)})


class _Search:
    """DPLL with watched literals, optional cost bound on blocking variables."""

    def __init__(self, clauses: Iterable[Clause], nvars: int, blocking: Sequence[int] = (),
                 node_limit: int = NODE_LIMIT):
        self.nvars = nvars
        self.node_limit = node_limit
        self.nodes = 0
        self.is_blocking = [False] * (nvars + 1)
        for b in blocking:
            self.is_blocking[b] = True
        self.value: list[bool | None] = [None] * (nvars + 1)
        self.trail: list[int] = []
        self.ntrue_blocking = 0
        self.watches: list[list[list[int]]] = [[] for _ in range(2 * nvars + 2)]
        self.units: list[int] = []
        self.trivially_unsat = False
        occ = [0] * (nvars + 1)
        for c in set(clauses):
            if c.is_tautology:
                continue
            lits = list(c)
            for lit in lits:
                occ[var(lit)] += 1
            if not lits:
                self.trivially_unsat = True
            elif len(lits) == 1:
                self.units.append(lits[0])
            else:
                self.watches[self._w(lits[0])].append(lits)
                self.watches[self._w(lits[1])].append(lits)
        plain = [v for v in range(1, nvars + 1) if not self.is_blocking[v]]
        plain.sort(key=lambda v: -occ[v])
        self.full_order = plain + [v for v in range(1, nvars + 1) if self.is_blocking[v]]
        # variables in no clause are left false instead of branched on
        self.order = [v for v in self.full_order if occ[v]]

    def _w(self, lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _assign(self, lit: int) -> bool:
        v = var(lit)
        cur = self.value[v]
        if cur is None:
            self.value[v] = lit > 0
            self.trail.append(lit)
            if lit > 0 and self.is_blocking[v]:
                self.ntrue_blocking += 1
            return True
        return cur == (lit > 0)

    def _undo(self, size: int) -> None:
        while len(self.trail) > size:
            lit = self.trail.pop()
            v = var(lit)
            self.value[v] = None
            if lit > 0 and self.is_blocking[v]:
                self.ntrue_blocking -= 1

    def _propagate(self, head: int) -> bool:
        value = self.value
        trail = self.trail
        while head < len(trail):
            false_lit = -trail[head]
            head += 1
            wl = self.watches[self._w(false_lit)]
            i = 0
            while i < len(wl):
                lits = wl[i]
                if lits[0] == false_lit:
                    lits[0], lits[1] = lits[1], lits[0]
                first = lits[0]
                fv = value[var(first)]
                if fv is not None and fv == (first > 0):
                    i += 1
                    continue
                for k in range(2, len(lits)):
                    lk = lits[k]
                    kv = value[var(lk)]
                    if kv is None or kv == (lk > 0):
                        lits[1], lits[k] = lk, lits[1]
                        self.watches[self._w(lk)].append(lits)
                        wl[i] = wl[-1]
                        wl.pop()
                        break
                else:
                    if fv is None:
                        self._assign(first)
                        i += 1
                    else:
                        return False
        return True

    def _root(self) -> bool:
        if self.trivially_unsat:
            return False
        for lit in self.units:
            if not self._assign(lit):
                return False
        return self._propagate(0)

    def _next_var(self) -> int | None:
        for v in self.order:
            if self.value[v] is None:
                return v
        return None

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise ResourceLimitExceeded("search exceeded %d nodes" % self.node_limit)

    def _snapshot(self) -> list[bool]:
        return [bool(x) for x in self.value]

    def first_solution(self) -> list[bool] | None:
        if not self._root():
            return None
        return self._dfs_first()

    def _dfs_first(self):
        v = self._next_var()
        if v is None:
            return self._snapshot()
        for lit in (-v, v):
            self._tick()
            mark = len(self.trail)
            if self._assign(lit) and self._propagate(mark):
                found = self._dfs_first()
                if found is not None:
                    return found
            self._undo(mark)
        return None

    def minimize(self, upper: int | None = None) -> tuple[int | None, list[bool] | None]:
        """Branch and bound; returns the best cost and one witness."""
        self.best = math.inf if upper is None else upper + 1
        self.best_model = None
        if not self._root():
            return None, None
        self._dfs_min()
        if self.best_model is None:
            return None, None
        return int(self.best), self.best_model

    def _dfs_min(self) -> None:
        if self.ntrue_blocking >= self.best:
            return
        v = self._next_var()
        if v is None:
            self.best = self.ntrue_blocking
            self.best_model = self._snapshot()
            return
        for lit in (-v, v):
            self._tick()
            mark = len(self.trail)
            if self._assign(lit) and self._propagate(mark):
                self._dfs_min()
            self._undo(mark)

    def all_within(self, bound: int) -> list[list[bool]]:
        """Every total satisfying assignment with at most ``bound`` blocking variables true."""
        self.order = self.full_order
        out: list[list[bool]] = []
        if not self._root():
            return out
        self._dfs_all(bound, out)
        return out

    def _dfs_all(self, bound: int, out: list) -> None:
        if self.ntrue_blocking > bound:
            return
        v = self._next_var()
        if v is None:
            out.append(self._snapshot())
            return
        for lit in (-v, v):
            self._tick()
            mark = len(self.trail)
            if self._assign(lit) and self._propagate(mark):
                self._dfs_all(bound, out)
            self._undo(mark)


def _to_assignment(model: list[bool], nvars: int) -> Substitution:
    return Substitution({v: (TRUE if model[v] else FALSE) for v in range(1, nvars + 1)})


def brute_cost(inst: Instance, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
               node_limit: int = NODE_LIMIT) -> CostReport:
    """Exact minimum number of blocking variables over hard-satisfying assignments."""
    if inst.nvars <= exhaustive_limit:
        space = SolutionSpace(inst.nvars, inst.blocking, inst.hard.distinct(), limit=exhaustive_limit)
        best = space.min_cost()
        if best is UNSATISFIABLE:
            return CostReport(UNSATISFIABLE, None, Method.EXHAUSTIVE)
        row = int(space.optimal_rows()[0])
        return CostReport(best, space.assignment(row), Method.EXHAUSTIVE)
    search = _Search(inst.hard.distinct(), inst.nvars, inst.blocking, node_limit)
    best, model = search.minimize()
    if best is None:
        return CostReport(UNSATISFIABLE, None, Method.BRANCH_AND_BOUND)
    return CostReport(best, _to_assignment(model, inst.nvars), Method.BRANCH_AND_BOUND)


def optimal_assignments(inst: Instance, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                        search_fallback: bool = False, node_limit: int = NODE_LIMIT) -> list[Substitution]:
    """All minimum-cost satisfying total assignments, in a canonical order.

    Above ``exhaustive_limit`` variables this raises unless ``search_fallback``
    is set, in which case the complete DPLL enumeration is used instead.
    """
    if inst.nvars <= exhaustive_limit:
        space = SolutionSpace(inst.nvars, inst.blocking, inst.hard.distinct(), limit=exhaustive_limit)
        return [space.assignment(int(r)) for r in space.optimal_rows()]
    if not search_fallback:
        raise ResourceLimitExceeded("%d variables exceed the exhaustive limit %d"
                                    % (inst.nvars, exhaustive_limit))
    best = brute_cost(inst, exhaustive_limit, node_limit).cost
    if best is UNSATISFIABLE:
        return []
    models = _Search(inst.hard.distinct(), inst.nvars, inst.blocking, node_limit).all_within(best)
    out = [_to_assignment(m, inst.nvars) for m in models]
    return sorted(out, key=lambda a: _row_of(a, inst.nvars))


def _row_of(alpha: Substitution, nvars: int) -> int:
    return sum(1 << (v - 1) for v in range(1, nvars + 1) if alpha.value(v))


def _same_cost(a, b) -> bool:
    if a is UNSATISFIABLE or b is UNSATISFIABLE:
        return a is b
    return a == b


def brute_redundant(inst: Instance, clause: Clause, exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> bool:
    """Does adding ``clause`` leave the minimum cost unchanged?"""
    space = SolutionSpace(inst.nvars, inst.blocking, inst.hard.distinct(), limit=exhaustive_limit)
    before = space.min_cost()
    after = space.min_cost(space.mask & space.clause_mask(clause))
    return _same_cost(before, after)


def brute_redundant_along(inst: Instance, steps: Iterable[tuple[Clause, bool]],
                          exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> list[bool]:
    """:func:`brute_redundant` for a sequence of clause additions.

    ``steps`` yields ``(clause, wanted)``; each clause is judged against the
    hard clauses plus every earlier clause of the sequence, and a verdict is
    returned for those with ``wanted`` set.
    """
    space = SolutionSpace(inst.nvars, inst.blocking, inst.hard.distinct(), limit=exhaustive_limit)
    current = space.min_cost()
    out = []
    for clause, wanted in steps:
        mask = space.mask & space.clause_mask(clause)
        after = UNSATISFIABLE if not mask.any() else int(space.costs[mask].min())
        if wanted:
            out.append(_same_cost(current, after))
        space.mask = mask
        current = after
    return out


def _extensions(clause: Clause, nvars: int, limit: int):
    """Rows over ``1..nvars`` (bit v-1 = variable v) that extend ``¬clause``."""
    if nvars > limit:
        raise ResourceLimitExceeded("%d variables exceed the exhaustive limit %d" % (nvars, limit))
    rows = np.arange(1 << nvars, dtype=np.int64)
    keep = np.ones(len(rows), dtype=bool)
    for lit in clause:
        bit = ((rows >> (var(lit) - 1)) & 1).astype(bool)
        keep &= ~bit if lit > 0 else bit
    return rows[keep]


def _image_column(rows: np.ndarray, img) -> np.ndarray:
    if img is TRUE:
        return np.ones(len(rows), dtype=np.int64)
    if img is FALSE:
        return np.zeros(len(rows), dtype=np.int64)
    bit = (rows >> (var(img) - 1)) & 1
    return bit if img > 0 else 1 - bit


def brute_max_delta(inst: Instance, clause: Clause, sigma: Substitution,
                    exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> int:
    """``max cost(τ∘σ) - cost(τ)`` over every total ``τ`` extending ``¬clause``."""
    nvars = max([inst.nvars, max(clause.variables, default=0), max(sigma.variables(), default=0)])
    rows = _extensions(clause, nvars, exhaustive_limit)
    delta = np.zeros(len(rows), dtype=np.int64)
    for b in inst.blocking:
        delta += _image_column(rows, sigma(b)) - _image_column(rows, b)
    return int(delta.max())


def brute_flip(clause: Clause, sigma: Substitution, exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> int:
    """``max HD(τ, τ∘σ)`` over total ``τ`` extending ``¬clause``, by enumeration."""
    nvars = max([max(clause.variables, default=0), max(sigma.variables(), default=0)])
    rows = _extensions(clause, nvars, exhaustive_limit)
    hd = np.zeros(len(rows), dtype=np.int64)
    for v in range(1, nvars + 1):
        hd += _image_column(rows, v) != _image_column(rows, sigma(v))
    return int(hd.max()) if len(rows) else 0


def hamming(a: Substitution, b: Substitution) -> int:
    if a.domain != b.domain:
        raise ValueError("assignments over different variables")
    return sum(1 for v in a.domain if a(v) is not b(v))


def min_pairwise_hamming(assignments: Sequence[Substitution]) -> int | float:
    """Minimum Hamming distance over unordered pairs; ``math.inf`` below two elements."""
    assignments = list(assignments)
    if assignments and any(a.domain != assignments[0].domain for a in assignments):
        raise ValueError("assignments over different variables")
    if len(assignments) < 2:
        return math.inf
    return min(hamming(a, b) for a, b in combinations(assignments, 2))


def sat_solve(formula: Formula, nvars: int | None = None,
              node_limit: int = NODE_LIMIT) -> Substitution | None:
    """A total satisfying assignment over ``1..nvars``, or ``None``."""
    nvars = formula.max_var() if nvars is None else nvars
    model = _Search(formula.distinct(), nvars, (), node_limit).first_solution()
    if model is None:
        return None
    return _to_assignment(model, nvars)
