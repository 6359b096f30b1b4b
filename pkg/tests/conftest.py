import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from costsr.gen import blockify
from costsr.model import FALSE, TRUE, Clause, Formula, Instance, Substitution

GOLDEN = Path(__file__).parent / "golden"

# the small worked formula: x ∨ y ∨ b1, ¬x ∨ b2, ¬y ∨ b3 over (x, y, b1, b2, b3)
F5 = Instance(Formula([Clause([1, 2, 3]), Clause([-1, 4]), Clause([-2, 5])]), (3, 4, 5), 5)
TWO_COPIES = Instance(Formula([Clause([1, 2]), Clause([-1, 2])]), (2,), 2)


@pytest.fixture
def f5():
    return F5


def clauses(nvars, min_size=0, max_size=3):
    return st.lists(st.integers(1, nvars), min_size=min_size, max_size=max_size, unique=True).flatmap(
        lambda vs: st.lists(st.booleans(), min_size=len(vs), max_size=len(vs)).map(
            lambda signs: Clause([v if s else -v for v, s in zip(vs, signs)])))


def formulas(nvars, max_clauses=8, min_size=1, max_size=3):
    return st.lists(clauses(nvars, min_size, max_size), max_size=max_clauses).map(Formula)


def images(nvars):
    return st.one_of(st.just(TRUE), st.just(FALSE),
                     st.integers(1, nvars).flatmap(lambda v: st.sampled_from([v, -v])))


def substitutions(nvars, max_moved=None):
    return st.dictionaries(st.integers(1, nvars), images(nvars),
                           max_size=max_moved if max_moved is not None else nvars).map(Substitution)


def assignments(nvars):
    return st.dictionaries(st.integers(1, nvars), st.sampled_from([TRUE, FALSE]),
                           max_size=nvars).map(Substitution)


@st.composite
def instances(draw, max_orig=6, max_soft=4, max_hard=8):
    nx = draw(st.integers(1, max_orig))
    hard = draw(st.lists(clauses(nx, 1, 3), max_size=max_hard))
    soft = draw(st.lists(clauses(nx, 1, 2), min_size=1, max_size=max_soft))
    return blockify(hard, soft, nx)[0]


def random_instance(rng: random.Random, max_orig=8, max_total=14) -> Instance:
    nx = rng.randint(2, max_orig)
    ns = rng.randint(1, min(6, max_total - nx))
    nh = rng.randint(0, 2 * nx)

    def rc(width):
        vs = rng.sample(range(1, nx + 1), min(width, nx))
        return Clause([v if rng.random() < 0.5 else -v for v in vs])

    hard = [rc(rng.randint(1, 3)) for _ in range(nh)]
    soft = [rc(rng.randint(1, 3)) for _ in range(ns)]
    return blockify(hard, soft, nx)[0]


# ------------------------------------------------------------ acceptance reporting

_CRITERIA: dict[int, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    number = getattr(item.function, "criterion", None)
    if number is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    desc = item.function.__doc__.strip().splitlines()[0] if item.function.__doc__ else item.name
    status = "PASS" if rep.passed else "FAIL"
    _CRITERIA[number] = "%s criterion %d: %s (%.2f s)" % (status, number, desc, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[n])
