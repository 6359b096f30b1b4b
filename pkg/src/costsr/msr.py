"""MaxSAT resolution with a redundancy rule on the hard database.

State is a pair ``(H, S)``: hard clauses (grown by RUP or cost-SR steps)
and a multiset of soft clauses starting at one ``¬b`` per blocking
variable.  Soft clauses are copied from ``H``, split on a fresh variable
or merged back; the number of empty soft clauses is a lower bound on the
optimum.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Union

from .model import Clause, Instance, Substitution
from .propagate import ClauseDatabase
from .rules import InvalidStep, RedundancyChecker, RuleClass, check_redundant_step, check_variables


@dataclass(frozen=True)
class HardInfer:
    clause: Clause


@dataclass(frozen=True)
class HardRedundant:
    clause: Clause
    witness: Substitution
    claimed: RuleClass = RuleClass.SR


@dataclass(frozen=True)
class CopyToSoft:
    clause: Clause


@dataclass(frozen=True)
class Split:
    clause: Clause
    var: int


@dataclass(frozen=True)
class Merge:
    clause: Clause
    var: int


@dataclass(frozen=True)
class ConcludeBot:
    k: int


MsrStep = Union[HardInfer, HardRedundant, CopyToSoft, Split, Merge, ConcludeBot]


@dataclass(frozen=True)
class MsrProof:
    steps: tuple[MsrStep, ...] = ()

    def __post_init__(self):
        steps = tuple(self.steps)
        object.__setattr__(self, "steps", steps)
        for i, s in enumerate(steps):
            if isinstance(s, ConcludeBot) and i != len(steps) - 1:
                raise ValueError("a conclusion must be the last step")

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


def initial_soft(inst: Instance) -> Counter:
    return Counter(Clause([-b]) for b in inst.blocking)


def _extend(clause: Clause, v: int, positive: bool) -> Clause:
    if v in clause.variables:
        raise InvalidStep("variable %d already occurs in %s" % (v, list(clause)))
    return Clause(list(clause) + [v if positive else -v])


def check_msr_proof(inst: Instance, proof, trace: Callable | None = None):
    """Check an MSR proof; returns a :class:`~costsr.proof.Verdict`.

    ``trace(index, hard_db, soft)`` is called after every accepted step
    (and once with index 0 for the initial state).
    """
    from .proof import Bound, Stats, Verdict

    steps = proof.steps if isinstance(proof, MsrProof) else tuple(proof)
    stats = Stats()
    db = ClauseDatabase(inst.hard.distinct())
    soft = initial_soft(inst)

    def reject(idx, reason):
        return Verdict(False, None, idx, reason, stats)

    if db.conflicts([]):
        return reject(0, "hard clauses propagate to a conflict; cost is undefined")
    checker = RedundancyChecker(db)
    if trace:
        trace(0, db, soft)

    for idx, step in enumerate(steps, 1):
        if isinstance(step, ConcludeBot):
            if idx != len(steps):
                return reject(idx, "conclusion must be the last step")
            have = soft[Clause()]
            if have < step.k:
                return reject(idx, "soft multiset holds %d empty clauses, %d claimed" % (have, step.k))
            return Verdict(True, Bound("bot", step.k), None, None, stats)
        try:
            if isinstance(step, HardInfer):
                check_variables(inst, step.clause)
                if not db.derives(step.clause):
                    return reject(idx, "clause %s is not RUP from the hard clauses" % (list(step.clause),))
                db.add(step.clause)
                stats.counts["rup"] += 1
            elif isinstance(step, HardRedundant):
                out = check_redundant_step(db, inst, step.clause, step.witness, step.claimed, checker)
                if not out.accepted:
                    return reject(idx, out.reason)
                db.add(step.clause)
                stats.counts[out.rule_class.value] += 1
            elif isinstance(step, CopyToSoft):
                if step.clause not in db:
                    return reject(idx, "clause %s is not in the hard database" % (list(step.clause),))
                soft[step.clause] += 1
                stats.counts["copy"] += 1
            elif isinstance(step, Split):
                check_variables(inst, step.clause)
                if step.var > inst.nvars:
                    raise InvalidStep("split on new variable %d" % step.var)
                if soft[step.clause] < 1:
                    return reject(idx, "soft clause %s not present" % (list(step.clause),))
                pos, neg = _extend(step.clause, step.var, True), _extend(step.clause, step.var, False)
                soft[step.clause] -= 1
                soft[pos] += 1
                soft[neg] += 1
                stats.counts["split"] += 1
            elif isinstance(step, Merge):
                pos, neg = _extend(step.clause, step.var, True), _extend(step.clause, step.var, False)
                if soft[pos] < 1 or soft[neg] < 1:
                    return reject(idx, "merge premises %s and %s not both soft" % (list(pos), list(neg)))
                soft[pos] -= 1
                soft[neg] -= 1
                soft[step.clause] += 1
                stats.counts["merge"] += 1
            else:
                raise TypeError("not an MSR step: %r" % (step,))
        except InvalidStep as exc:
            return reject(idx, str(exc))
        soft = +soft
        if hasattr(step, "clause"):
            stats.max_width = max(stats.max_width, len(step.clause))
        if trace:
            trace(idx, db, soft)
    return Verdict(True, None, None, None, stats)
