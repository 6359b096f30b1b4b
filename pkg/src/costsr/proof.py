"""Cost-SR proofs and their checker.

A proof is a list of steps processed against a growing clause database
(the hard clauses plus everything derived so far, never shrinking).
``Inferred`` steps must be RUP, ``Redundant`` steps carry a witness, and
an optional final ``Conclude`` claims a lower bound (``geq``) or the exact
optimum (``eq``) read off the unit clauses in the database.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Union

from .model import Clause, Instance, Substitution
from .propagate import ClauseDatabase
from .rules import (
    CostCheckReport,
    FlipDegree,
    InvalidStep,
    RedundancyChecker,
    RuleClass,
    check_redundant_step,
    check_variables,
    flip_degree,
)


@dataclass(frozen=True)
class Inferred:
    clause: Clause


@dataclass(frozen=True)
class Redundant:
    clause: Clause
    witness: Substitution
    claimed: RuleClass = RuleClass.SR


@dataclass(frozen=True)
class Conclude:
    bound: str  # "geq" or "eq"
    k: int

    def __post_init__(self):
        if self.bound not in ("geq", "eq"):
            raise ValueError("bound must be 'geq' or 'eq', got %r" % (self.bound,))
        if self.k < 0:
            raise ValueError("negative bound")


Step = Union[Inferred, Redundant, Conclude]


@dataclass(frozen=True)
class Proof:
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        steps = tuple(self.steps)
        object.__setattr__(self, "steps", steps)
        for i, s in enumerate(steps):
            if isinstance(s, Conclude) and i != len(steps) - 1:
                raise ValueError("a conclusion must be the last step")

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    @property
    def conclusion(self) -> Conclude | None:
        if self.steps and isinstance(self.steps[-1], Conclude):
            return self.steps[-1]
        return None

    @property
    def derivation(self) -> tuple[Step, ...]:
        return self.steps[:-1] if self.conclusion else self.steps


class Bound(NamedTuple):
    kind: str  # "geq", "eq" or "bot" (MSR)
    k: int

    def __str__(self) -> str:
        return "%s %d" % (self.kind, self.k)


@dataclass
class Stats:
    counts: Counter = field(default_factory=Counter)
    max_width: int = 0
    max_flip: FlipDegree | None = None

    def to_dict(self) -> dict:
        return {
            "counts": dict(sorted(self.counts.items())),
            "max_width": self.max_width,
            "max_flip": None if self.max_flip is None else
            {"value": self.max_flip.value, "exact": self.max_flip.exact},
        }


@dataclass
class Verdict:
    accepted: bool
    bound: Bound | None = None
    failing_step: int | None = None
    reason: str | None = None
    stats: Stats = field(default_factory=Stats)
    reports: dict[int, CostCheckReport] = field(default_factory=dict, repr=False)

    def __bool__(self) -> bool:
        return self.accepted


def conclusion_holds(units, inst: Instance, bound: str, k: int) -> tuple[bool, str | None]:
    """Validate a conclusion against the unit literals of a database."""
    units = set(units)
    positive = sorted(b for b in inst.blocking if b in units)
    if len(positive) < k:
        return False, "only %d positive blocking units, %s %d claimed" % (len(positive), bound, k)
    if bound == "eq":
        need = [b for b in inst.blocking if -b not in units]
        missing = [b for b in need if b not in units]
        if missing:
            return False, "blocking variable %d has neither unit" % missing[0]
        if len(need) > k:
            return False, "%d blocking variables lack a negative unit, eq %d claimed" % (len(need), k)
    return True, None


def _flip_max(a: FlipDegree | None, b: FlipDegree) -> FlipDegree:
    if a is None:
        return b
    if b.value > a.value:
        return b
    if b.value == a.value:
        return FlipDegree(a.value, a.exact and b.exact)
    return a


def check_proof(inst: Instance, proof: Proof, flip_limit: int = 16, with_flip: bool = True,
                require_consistent: bool = True) -> Verdict:
    """Check every step in order and validate the conclusion.

    ``flip_limit`` bounds the number of free variables enumerated when
    computing the exact flip degree reported in the statistics.  Plain
    refutations are checked with ``require_consistent=False``, which skips
    the load-time conflict test on the hard clauses.
    """
    stats = Stats()
    reports: dict[int, CostCheckReport] = {}

    def reject(idx, reason):
        return Verdict(False, None, idx, reason, stats, reports)

    db = ClauseDatabase(inst.hard.distinct())
    if require_consistent and db.conflicts([]):
        return reject(0, "hard clauses propagate to a conflict; cost is undefined")
    checker = RedundancyChecker(db)

    for idx, step in enumerate(proof.steps, 1):
        if isinstance(step, Conclude):
            ok, why = conclusion_holds(db.units, inst, step.bound, step.k)
            if not ok:
                return reject(idx, "conclusion not supported: " + why)
            return Verdict(True, Bound(step.bound, step.k), None, None, stats, reports)
        clause = step.clause
        try:
            check_variables(inst, clause, getattr(step, "witness", None))
            if isinstance(step, Inferred):
                if not db.derives(clause):
                    return reject(idx, "clause %s is not RUP" % (list(clause),))
                stats.counts["rup"] += 1
            else:
                out = check_redundant_step(db, inst, clause, step.witness, step.claimed, checker)
                reports[idx] = out.report
                if not out.accepted:
                    return reject(idx, out.reason)
                stats.counts[out.rule_class.value] += 1
                if with_flip:
                    stats.max_flip = _flip_max(stats.max_flip,
                                               flip_degree(clause, step.witness, inst, flip_limit))
        except InvalidStep as exc:
            return reject(idx, str(exc))
        stats.max_width = max(stats.max_width, len(clause))
        db.add(clause)
    return Verdict(True, None, None, None, stats, reports)


def replay(inst: Instance, proof: Proof):
    """Yield ``(index, step, database_before_step)`` for every derivation step.

    The database object is shared and grows after each yield; callers that
    need a snapshot should copy ``db.to_formula()`` before resuming.
    """
    db = ClauseDatabase(inst.hard.distinct())
    for idx, step in enumerate(proof.derivation, 1):
        yield idx, step, db
        db.add(step.clause)
