from hypothesis import given, settings
from hypothesis import strategies as st

from costsr.model import Clause, Formula, Substitution, restrict_formula
from costsr.oracle import SolutionSpace
from costsr.propagate import ClauseDatabase, Status, derives_all, derives_by_up, unit_propagate

from conftest import clauses, formulas, substitutions


def test_fixpoint_with_units():
    r = unit_propagate(Formula([Clause([1]), Clause([-1, 2])]))
    assert r.status is Status.FIXPOINT
    assert r.implied_units == {1, 2}
    assert len(r.residual) == 0


def test_conflict():
    assert unit_propagate(Formula([Clause([1]), Clause([-1])])).conflict


def test_no_units():
    f = Formula([Clause([1, 2])])
    r = unit_propagate(f)
    assert r.status is Status.FIXPOINT and not r.implied_units and r.residual == f


def test_derives_examples():
    g = Formula([Clause([1]), Clause([-1, 2])])
    assert derives_by_up(g, Clause([2]))
    assert not derives_by_up(Formula([Clause([1, 2])]), Clause([1]))
    assert derives_by_up(g, Clause([-1, 2]))
    assert derives_by_up(Formula(), Clause([3, -3]))


def test_derives_all_examples():
    g = Formula([Clause([1])])
    assert derives_all(g, [])[0]
    assert derives_all(g, [Clause([1])])[0]
    ok, failing = derives_all(g, [Clause([1]), Clause([2])])
    assert not ok and failing == Clause([2])


def test_database_leaves_no_trail():
    db = ClauseDatabase([Clause([1, 2]), Clause([-2, 3]), Clause([-3, -1])])
    first = db.propagate([-1])
    second = db.propagate([-1])
    assert first == second == (False, [-1, 2, 3])


@given(formulas(6, 10))
def test_confluence(f):
    a = unit_propagate(f)
    b = unit_propagate(f, order=lambda pending: pending[-1])
    c = unit_propagate(f, order=lambda pending: pending[len(pending) // 2])
    if a.conflict:
        assert b.conflict and c.conflict
    else:
        assert a == b == c


@settings(max_examples=200)
@given(formulas(6, 10), clauses(6, 0, 3))
def test_engine_matches_reference(f, c):
    assert ClauseDatabase(f.distinct()).derives(c) == derives_by_up(f, c)


@settings(max_examples=200)
@given(formulas(6, 10), st.lists(st.integers(-6, 6).filter(bool), max_size=4, unique_by=abs))
def test_engine_conflict_matches_reference(f, lits):
    expected = unit_propagate(restrict_formula(f, Substitution.from_literals(lits))).conflict
    assert ClauseDatabase(f.distinct()).conflicts(lits) == expected


@settings(max_examples=100)
@given(formulas(7, 12), clauses(7, 0, 3))
def test_soundness_against_enumeration(f, c):
    if derives_by_up(f, c):
        space = SolutionSpace(7, (), f.distinct())
        assert not (space.mask & ~space.clause_mask(c)).any()


@settings(max_examples=200)
@given(formulas(5, 8), formulas(5, 4), substitutions(5))
def test_restriction_closure(g, d, sigma):
    if derives_all(g, d)[0]:
        assert derives_all(restrict_formula(g, sigma), restrict_formula(d, sigma))[0]
