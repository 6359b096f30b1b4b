import math

import pytest
from hypothesis import given, settings

from costsr.gen import gen_bphp, gen_hamming_family, php_cnf
from costsr.model import Clause, Formula, Instance, assignment_from_bits
from costsr.oracle import (
    UNSATISFIABLE,
    Method,
    ResourceLimitExceeded,
    brute_cost,
    brute_redundant,
    brute_redundant_along,
    min_pairwise_hamming,
    optimal_assignments,
    sat_solve,
)

from conftest import F5, instances


def bits(alpha, nvars):
    return "".join("1" if alpha.value(v) else "0" for v in range(1, nvars + 1))


class TestBruteCost:
    def test_worked_formula(self):
        assert brute_cost(F5).cost == 1

    def test_bphp_4_2_by_search(self):
        r = brute_cost(gen_bphp(4, 2))
        assert r.cost == 2 and r.method is Method.BRANCH_AND_BOUND

    def test_unsatisfiable(self):
        inst = Instance(Formula([Clause([1]), Clause([-1])]), (), 1)
        assert brute_cost(inst).cost is UNSATISFIABLE
        assert brute_cost(inst, exhaustive_limit=0).cost is UNSATISFIABLE

    def test_node_limit(self):
        with pytest.raises(ResourceLimitExceeded):
            brute_cost(gen_bphp(6, 5), exhaustive_limit=10, node_limit=50)


class TestOptima:
    def test_worked_formula(self):
        got = sorted(bits(a, 5) for a in optimal_assignments(F5))
        assert got == ["00100", "01001", "10010"]

    def test_single_blocking(self):
        inst = Instance(Formula([Clause([1])]), (1,), 1)
        assert [bits(a, 1) for a in optimal_assignments(inst)] == ["1"]

    def test_hamming_two(self):
        assert len(optimal_assignments(gen_hamming_family(2))) == 2

    def test_limit(self):
        with pytest.raises(ResourceLimitExceeded):
            optimal_assignments(gen_hamming_family(6))


class TestBruteRedundant:
    def test_member(self):
        assert brute_redundant(F5, Clause([1, 2, 3]))

    def test_unit_b1(self):
        assert brute_redundant(F5, Clause([3]))

    def test_makes_unsat(self):
        inst = Instance(Formula([Clause([1])]), (1,), 1)
        assert not brute_redundant(inst, Clause([-1]))

    def test_along_matches_single(self):
        steps = [(Clause([3]), True), (Clause([-4]), True), (Clause([-3]), True)]
        assert brute_redundant_along(F5, steps) == [True, True, False]


class TestHamming:
    def test_three(self):
        opt = [assignment_from_bits(map(int, s)) for s in ("00100", "10010", "01001")]
        assert min_pairwise_hamming(opt) == 3

    def test_singleton(self):
        assert min_pairwise_hamming([assignment_from_bits([0, 1])]) == math.inf

    def test_pair(self):
        assert min_pairwise_hamming([assignment_from_bits([0, 0]), assignment_from_bits([0, 1])]) == 1


class TestSat:
    def test_unit(self):
        alpha = sat_solve(Formula([Clause([1])]))
        assert alpha.value(1) is True

    def test_contradiction(self):
        assert sat_solve(Formula([Clause([1]), Clause([-1])])) is None

    def test_php(self):
        assert sat_solve(php_cnf(3, 2)) is None
        assert sat_solve(php_cnf(5, 4)) is None


@settings(max_examples=200, deadline=None)
@given(instances(max_orig=12, max_soft=6, max_hard=14))
def test_exhaustive_and_search_agree(inst):
    assert inst.nvars <= 18
    a = brute_cost(inst)
    b = brute_cost(inst, exhaustive_limit=0)
    assert a.method is Method.EXHAUSTIVE and b.method is Method.BRANCH_AND_BOUND
    assert a.cost == b.cost
    if a.cost is not UNSATISFIABLE:
        ex = sorted(bits(x, inst.nvars) for x in optimal_assignments(inst))
        se = sorted(bits(x, inst.nvars) for x in optimal_assignments(inst, exhaustive_limit=0,
                                                                      search_fallback=True))
        assert ex == se


@settings(max_examples=100, deadline=None)
@given(instances(max_orig=8, max_soft=4, max_hard=10))
def test_sat_solve_agrees(inst):
    model = sat_solve(inst.hard, inst.nvars)
    satisfiable = brute_cost(inst).cost is not UNSATISFIABLE
    assert (model is not None) == satisfiable
    if model is not None:
        assert all(any(model.value(abs(l)) == (l > 0) for l in c) for c in inst.hard)
