import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from costsr.formats import parse_instance, parse_msr_proof
from costsr.model import TRUE, Clause, Formula, Instance, Substitution
from costsr.msr import ConcludeBot, CopyToSoft, HardInfer, HardRedundant, Merge, MsrProof, Split, check_msr_proof
from costsr.oracle import SolutionSpace, brute_cost
from costsr.propagate import ClauseDatabase
from costsr.rules import RuleClass

from conftest import TWO_COPIES, clauses, instances
from msr_cases import CASES


def test_worked_example():
    p = MsrProof((HardInfer(Clause([2])), CopyToSoft(Clause([2])), Merge(Clause(), 2), ConcludeBot(1)))
    v = check_msr_proof(TWO_COPIES, p)
    assert v.accepted and v.bound.k == 1 and brute_cost(TWO_COPIES).cost == 1


def test_copy_requires_hard_clause():
    v = check_msr_proof(TWO_COPIES, [CopyToSoft(Clause([1]))])
    assert not v.accepted and v.failing_step == 1


def test_split_then_merge_is_identity():
    seen = []
    p = [Split(Clause([-2]), 1), Merge(Clause([-2]), 1), ConcludeBot(0)]
    v = check_msr_proof(TWO_COPIES, p, trace=lambda i, db, soft: seen.append(dict(soft)))
    assert v.accepted and seen[0] == seen[2]


def test_merge_premises_missing():
    v = check_msr_proof(TWO_COPIES, [Merge(Clause(), 2)])
    assert not v.accepted and "merge premises" in v.reason


def test_split_on_own_variable():
    v = check_msr_proof(TWO_COPIES, [Split(Clause([-2]), 2)])
    assert not v.accepted


def test_overclaim():
    v = check_msr_proof(TWO_COPIES, parse_msr_proof("conclude bot 1\n"))
    assert not v.accepted


def test_hard_redundant():
    inst = Instance(Formula([Clause([1, 3]), Clause([2, 3])]), (3,), 3)
    p = [HardRedundant(Clause([1]), Substitution({1: TRUE}), RuleClass.PR)]
    assert check_msr_proof(inst, p).accepted


def soft_optimum(space: SolutionSpace, soft) -> int | None:
    falsified = 0
    for c, n in soft.items():
        falsified = falsified + n * (~space.clause_mask(c)).astype(int)
    if not space.mask.any():
        return None
    return int((falsified if not isinstance(falsified, int) else 0 * space.mask)[space.mask].min())


@settings(max_examples=60, deadline=None)
@given(instances(max_orig=5, max_soft=4, max_hard=6), st.data())
def test_cost_invariance(inst, data):
    assume(inst.nvars <= 12)
    assume(not ClauseDatabase(inst.hard.distinct()).conflicts([]))
    cost = brute_cost(inst).cost
    assume(isinstance(cost, int))
    steps = []
    soft_pool = [Clause([-b]) for b in inst.blocking]
    for _ in range(data.draw(st.integers(1, 6))):
        kind = data.draw(st.sampled_from(["h", "copy", "split", "merge"]))
        if kind == "h":
            steps.append(HardInfer(data.draw(clauses(inst.nvars, 1, 2))))
        elif kind == "copy":
            steps.append(CopyToSoft(data.draw(st.sampled_from(inst.hard.distinct()))))
        else:
            c = data.draw(st.sampled_from(soft_pool))
            v = data.draw(st.integers(1, inst.nvars))
            steps.append((Split if kind == "split" else Merge)(c, v))
            if kind == "split" and v not in c.variables:
                soft_pool += [Clause(list(c) + [v]), Clause(list(c) + [-v])]
            if kind == "merge" and len(c) > 0:
                soft_pool.append(Clause(c[:-1]))

    def trace(i, db, soft):
        space = SolutionSpace(inst.nvars, inst.blocking, db.clauses)
        assert soft_optimum(space, soft) == cost

    check_msr_proof(inst, steps, trace=trace)


@pytest.mark.parametrize("name,bcnf,text,expected", CASES, ids=[c[0] for c in CASES])
def test_hand_written(name, bcnf, text, expected):
    inst = parse_instance(bcnf)
    v = check_msr_proof(inst, parse_msr_proof(text))
    if expected is None:
        assert not v.accepted
    else:
        assert v.accepted and v.bound.k == expected
        assert v.bound.k <= brute_cost(inst).cost
