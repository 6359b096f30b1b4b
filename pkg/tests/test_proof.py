import random

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from costsr.formats import parse_proof
from costsr.gen import certify_by_enumeration
from costsr.model import FALSE, IDENTITY, TRUE, Clause, Formula, Instance, Substitution
from costsr.oracle import UNSATISFIABLE, brute_cost
from costsr.proof import Bound, Conclude, Inferred, Proof, Redundant, check_proof, conclusion_holds
from costsr.propagate import ClauseDatabase
from costsr.rules import RuleClass

from conftest import F5, TWO_COPIES, clauses, instances, random_instance


def test_rup_then_eq():
    v = check_proof(TWO_COPIES, parse_proof("2 0\nconclude eq 1\n"))
    assert v.accepted and v.bound == Bound("eq", 1)
    assert brute_cost(TWO_COPIES).cost == 1


def test_geq_needs_enough_units():
    v = check_proof(TWO_COPIES, parse_proof("2 0\nconclude geq 2\n"))
    assert not v.accepted and v.failing_step == 2


def test_cost_rejection_on_lpr_unit():
    v = check_proof(F5, Proof((Redundant(Clause([3]), Substitution({3: TRUE}), RuleClass.LPR),)))
    assert not v.accepted and v.failing_step == 1 and "cost" in v.reason
    assert v.reports[1].max_delta == 1


def test_non_rup_rejected():
    v = check_proof(F5, Proof((Inferred(Clause([1])),)))
    assert not v.accepted and "RUP" in v.reason


def test_new_variable_rejected():
    v = check_proof(F5, Proof((Inferred(Clause([7])),)))
    assert not v.accepted and "new variable" in v.reason


def test_tautology_redundant_rejected():
    v = check_proof(F5, Proof((Redundant(Clause([1, -1]), IDENTITY),)))
    assert not v.accepted and "tautolog" in v.reason


def test_inconsistent_hard_clauses():
    inst = Instance(Formula([Clause([1]), Clause([-1])]), (), 1)
    v = check_proof(inst, Proof())
    assert not v.accepted and v.failing_step == 0


def test_no_conclusion():
    v = check_proof(F5, Proof((Inferred(Clause([1, 2, 3])),)))
    assert v.accepted and v.bound is None


def test_stats():
    v = check_proof(F5, parse_proof("3 0 w 3 t 0 #sr\n"))
    assert not v.accepted  # forcing b3 on raises the cost
    inst = Instance(Formula([Clause([-1, 3]), Clause([-2, 3])]), (3,), 3)
    v = check_proof(inst, parse_proof("-1 -2 0 w 1 f 2 f 3 f 0 #pr\n"))
    assert v.accepted and v.stats.counts["pr"] == 1 and v.stats.max_width == 2
    assert v.stats.max_flip.exact


class TestConclusion:
    inst = Instance(Formula(), (1, 2, 3), 3)

    def test_eq(self):
        assert conclusion_holds({1, -2, -3}, self.inst, "eq", 1)[0]
        assert not conclusion_holds({1, -2}, self.inst, "eq", 1)[0]
        assert not conclusion_holds({1, 2, -3}, self.inst, "eq", 1)[0]

    def test_geq_distinct(self):
        assert conclusion_holds({1, 2}, self.inst, "geq", 2)[0]
        assert not conclusion_holds({1, -2}, self.inst, "geq", 2)[0]
        assert conclusion_holds(set(), self.inst, "geq", 0)[0]


@settings(max_examples=100, deadline=None)
@given(instances(), st.data())
def test_empty_witness_closure(inst, data):
    assume(not ClauseDatabase(inst.hard.distinct()).conflicts([]))
    c = data.draw(clauses(inst.nvars, 0, 3))
    assume(not c.is_tautology)
    as_rup = check_proof(inst, Proof((Inferred(c),)))
    if as_rup.accepted:
        assert check_proof(inst, Proof((Redundant(c, IDENTITY),))).accepted


def test_soundness_on_certified_instances():
    rng = random.Random(7)
    checked = 0
    while checked < 40:
        inst = random_instance(rng, max_orig=6, max_total=10)
        cost = brute_cost(inst).cost
        if cost is UNSATISFIABLE or ClauseDatabase(inst.hard.distinct()).conflicts([]):
            continue
        proof = certify_by_enumeration(inst)
        v = check_proof(inst, proof)
        assert v.accepted and v.bound == Bound("eq", cost)
        # overclaiming is rejected
        wrong = Proof(proof.steps[:-1] + (Conclude("eq", cost + 1),))
        assert not check_proof(inst, wrong).accepted
        checked += 1


@settings(max_examples=100, deadline=None)
@given(instances(), st.data())
def test_accepted_bounds_are_sound(inst, data):
    # random short proofs: whatever gets accepted must respect the oracle
    assume(not ClauseDatabase(inst.hard.distinct()).conflicts([]))
    steps = []
    for _ in range(data.draw(st.integers(1, 4))):
        c = data.draw(clauses(inst.nvars, 1, 2))
        if c.is_tautology:
            continue
        w = {abs(l): data.draw(st.sampled_from([TRUE, FALSE])) for l in c}
        steps.append(Redundant(c, Substitution(w)) if data.draw(st.booleans()) else Inferred(c))
    k = data.draw(st.integers(0, 3))
    bound = data.draw(st.sampled_from(["geq", "eq"]))
    v = check_proof(inst, Proof(tuple(steps) + (Conclude(bound, k),)))
    if v.accepted:
        cost = brute_cost(inst).cost
        assert cost >= k if bound == "geq" else cost == k
