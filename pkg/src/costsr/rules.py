"""Redundancy rules: cost condition, redundancy condition, classification.

A clause ``C`` with witness ``σ`` is accepted when

* every total ``τ`` extending ``¬C`` has ``cost(τ∘σ) <= cost(τ)``, and
* ``db↾¬C ⊢₁ (db ∪ {C})↾σ``.

The cost side is decided in closed form: only blocking positions matter,
the part fixed by ``¬C`` is a constant, and every other variable can be set
independently to its best value.
"""

from __future__ import annotations

import enum
from collections import OrderedDict, defaultdict
from dataclasses import dataclass, field

import numpy as np

from .model import (
    FALSE,
    SATISFIED,
    TRUE,
    Clause,
    Formula,
    Instance,
    Substitution,
    negation_of,
    restrict_clause,
    var,
)
from .propagate import ClauseDatabase


class InvalidStep(ValueError):
    """A step violates a precondition (tautology, new variables, ...)."""


class RuleClass(enum.Enum):
    """Witness classes, ordered from most specific to most general."""

    LPR = "lpr"
    SPR = "spr"
    PR = "pr"
    SR = "sr"

    @property
    def rank(self) -> int:
        return _RANK[self]

    def within(self, ceiling: "RuleClass") -> bool:
        return self.rank <= ceiling.rank


_RANK = {RuleClass.LPR: 0, RuleClass.SPR: 1, RuleClass.PR: 2, RuleClass.SR: 3}


@dataclass(frozen=True)
class CostCheckReport:
    """Closed-form evaluation of ``max_{τ ⊇ ¬C} cost(τ∘σ) - cost(τ)``.

    ``constant`` and ``coefficients`` give the same objective as a linear
    form ``constant + Σ coefficients[v]·v`` over the free variables, which
    is what the pseudo-Boolean export writes out.
    """

    fixed_part: int
    free_var_gains: dict[int, int]
    max_delta: int
    ok: bool
    constant: int = 0
    coefficients: dict[int, int] = field(default_factory=dict)


def check_cost_condition(inst: Instance, clause: Clause, sigma: Substitution) -> CostCheckReport:
    if clause.is_tautology:
        raise InvalidStep("tautological clause")
    neg = negation_of(clause)
    fixed = 0
    # per free variable: net new ones when set to 0 / to 1
    delta = defaultdict(lambda: [0, 0])
    for b in inst.blocking:
        img = sigma(b)
        if img is TRUE:
            fixed += 1
        elif isinstance(img, int):
            v = var(img)
            fixed_val = neg.value(v)
            if fixed_val is not None:
                fixed += int(fixed_val == (img > 0))
            else:
                delta[v][1 if img > 0 else 0] += 1
        bval = neg.value(b)
        if bval is not None:
            fixed -= int(bval)
        else:
            delta[b][1] -= 1
    gains = {v: max(d0, d1) for v, d0, d1 in ((v, d[0], d[1]) for v, d in sorted(delta.items()))}
    max_delta = fixed + sum(gains.values())
    constant = fixed + sum(d[0] for d in delta.values())
    coefficients = {v: d[1] - d[0] for v, d in sorted(delta.items()) if d[1] != d[0]}
    return CostCheckReport(fixed, gains, max_delta, max_delta <= 0, constant, coefficients)


def classify_witness(clause: Clause, sigma: Substitution) -> RuleClass:
    if not sigma.is_assignment:
        return RuleClass.SR
    cvars = clause.variables
    if sigma.domain != cvars:
        return RuleClass.PR
    neg = negation_of(clause) if not clause.is_tautology else None
    if neg is not None:
        flips = sum(1 for v in cvars if sigma(v) is not neg(v))
        if flips == 1:
            return RuleClass.LPR
    return RuleClass.SPR


class RedundancyChecker:
    """Redundancy-condition checks against a growing :class:`ClauseDatabase`.

    Only RHS clauses touched by the witness, or mentioning a variable of
    the candidate clause, can differ from their LHS counterparts; all other
    clauses appear verbatim on both sides and are skipped.  For witnesses
    reused across steps the list of touched, unsatisfied images is cached
    and extended incrementally, which is safe because the database never
    loses clauses.
    """

    memo_size = 64

    def __init__(self, db: ClauseDatabase):
        self.db = db
        self._memo: OrderedDict[Substitution, tuple[int, list[tuple[int, Clause]]]] = OrderedDict()

    def _touched_images(self, sigma: Substitution) -> list[tuple[int, Clause]]:
        db = self.db
        entry = self._memo.get(sigma)
        if entry is None:
            idxs: set[int] = set()
            for v in sigma.moved:
                idxs.update(db.occurrences(v))
            start, images = len(db), []
            for i in sorted(idxs):
                img = restrict_clause(db.clauses[i], sigma)
                if img is not SATISFIED:
                    images.append((i, img))
        else:
            start, images = entry
            moved = sigma.moved
            for i in range(start, len(db)):
                c = db.clauses[i]
                if any(var(lit) in moved for lit in c):
                    img = restrict_clause(c, sigma)
                    if img is not SATISFIED:
                        images.append((i, img))
            start = len(db)
            self._memo.move_to_end(sigma)
        self._memo[sigma] = (start, images)
        if len(self._memo) > self.memo_size:
            self._memo.popitem(last=False)
        return images

    def check(self, clause: Clause, sigma: Substitution) -> tuple[bool, Clause | None]:
        """Return ``(holds, failing_rhs_clause)``."""
        db = self.db
        cvars = clause.variables
        neg_lits = [-lit for lit in clause]
        if db.conflicts(neg_lits):
            return True, None

        def lhs_derives(d: Clause) -> bool:
            if d.is_tautology:
                return True
            assumptions = list(neg_lits)
            for lit in d:
                if var(lit) not in cvars:
                    assumptions.append(-lit)
            return db.conflicts(assumptions)

        img = restrict_clause(clause, sigma)
        if img is not SATISFIED and not lhs_derives(img):
            return False, img
        touched = self._touched_images(sigma)
        seen = set()
        for i, img in touched:
            seen.add(i)
            if not cvars.isdisjoint(img.variables) or img not in db:
                if not lhs_derives(img):
                    return False, img
        moved = sigma.moved
        for v in cvars - moved:
            for i in db.occurrences(v):
                if i in seen:
                    continue
                seen.add(i)
                c = db.clauses[i]
                if any(var(lit) in moved for lit in c):
                    continue  # already handled as touched (satisfied or checked)
                if not lhs_derives(c):
                    return False, c
        return True, None


def check_redundancy_condition(db, clause: Clause, sigma: Substitution) -> bool:
    """``db↾¬C ⊢₁ (db ∪ {C})↾σ`` for a :class:`Formula` or :class:`ClauseDatabase`."""
    if clause.is_tautology:
        raise InvalidStep("tautological clause")
    if isinstance(db, Formula):
        db = ClauseDatabase(db.distinct())
    return RedundancyChecker(db).check(clause, sigma)[0]


def check_cost_bc(db, clause: Clause, lit: int, inst: Instance) -> bool:
    """Is ``clause`` blocked on ``lit`` without ``lit`` being a positive blocking literal."""
    if lit not in clause:
        raise ValueError("literal %d not in clause" % lit)
    if lit > 0 and inst.is_blocking(lit):
        return False
    rest = [l for l in clause if l != lit]
    clauses = db.distinct() if isinstance(db, Formula) else db
    for d in clauses:
        if -lit in d:
            resolvent = Clause(rest + [l for l in d if l != -lit])
            if not resolvent.is_tautology:
                return False
    return True


@dataclass(frozen=True)
class FlipDegree:
    value: int
    exact: bool

    def __str__(self) -> str:
        return ("%d" if self.exact else "<=%d") % self.value


def flip_degree(clause: Clause, sigma: Substitution, inst: Instance | None = None,
                exhaustive_limit: int = 20) -> FlipDegree:
    """``max_{τ ⊇ ¬C} HD(τ, τ∘σ)``, exactly when few variables are free."""
    neg = negation_of(clause)
    moved = sorted(sigma.moved)
    if not moved:
        return FlipDegree(0, True)
    relevant = set(moved)
    relevant.update(var(img) for v in moved if isinstance(img := sigma(v), int))
    free = sorted(v for v in relevant if neg.value(v) is None)
    if len(free) > exhaustive_limit:
        return FlipDegree(len(moved), False)
    col = {v: i for i, v in enumerate(free)}
    rows = 1 << len(free)
    bits = ((np.arange(rows, dtype=np.int64)[:, None] >> np.arange(len(free), dtype=np.int64)) & 1).astype(bool)

    def column(lit_or_const):
        if lit_or_const is TRUE:
            return np.ones(rows, dtype=bool)
        if lit_or_const is FALSE:
            return np.zeros(rows, dtype=bool)
        v = var(lit_or_const)
        fixed = neg.value(v)
        base = np.full(rows, fixed, dtype=bool) if fixed is not None else bits[:, col[v]]
        return base if lit_or_const > 0 else ~base

    hd = np.zeros(rows, dtype=np.int64)
    for v in moved:
        hd += column(v) != column(sigma(v))
    return FlipDegree(int(hd.max()), True)


@dataclass(frozen=True)
class StepOutcome:
    accepted: bool
    report: CostCheckReport | None = None
    rule_class: RuleClass | None = None
    reason: str | None = None


def check_variables(inst: Instance, clause: Clause, sigma: Substitution | None = None) -> None:
    for v in clause.variables:
        if v > inst.nvars:
            raise InvalidStep("clause introduces new variable %d" % v)
    if sigma is not None:
        for v in sigma.variables():
            if v > inst.nvars:
                raise InvalidStep("witness mentions new variable %d" % v)


def check_redundant_step(db, inst: Instance, clause: Clause, sigma: Substitution,
                         claimed: RuleClass = RuleClass.SR, checker: RedundancyChecker | None = None
                         ) -> StepOutcome:
    """Both conditions plus the claimed-class ceiling.

    Raises :class:`InvalidStep` for tautological clauses and new variables.
    """
    if clause.is_tautology:
        raise InvalidStep("tautological clause cannot be added by redundancy")
    check_variables(inst, clause, sigma)
    report = check_cost_condition(inst, clause, sigma)
    cls = classify_witness(clause, sigma)
    if not cls.within(claimed):
        return StepOutcome(False, report, cls, "witness is %s, more general than claimed %s"
                           % (cls.value, claimed.value))
    if not report.ok:
        return StepOutcome(False, report, cls, "cost condition fails: max delta %+d" % report.max_delta)
    if checker is None:
        if isinstance(db, Formula):
            db = ClauseDatabase(db.distinct())
        checker = RedundancyChecker(db)
    holds, failing = checker.check(clause, sigma)
    if not holds:
        return StepOutcome(False, report, cls, "redundancy condition fails on %s" % (list(failing),))
    return StepOutcome(True, report, cls)
