"""Instance and proof generators.

Everything here is deterministic: the same arguments always give the same
instance, the same variable numbering and the same proof text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .model import (
    FALSE,
    TRUE,
    Clause,
    Formula,
    Instance,
    Substitution,
    compose,
    cost_of,
    negation_of,
    restrict_clause,
    restrict_formula,
    SATISFIED,
    satisfies,
    var,
)
from .oracle import ResourceLimitExceeded, SolutionSpace, sat_solve
from .proof import Conclude, Inferred, Proof, Redundant, check_proof
from .propagate import ClauseDatabase
from .rules import RuleClass


class GenerationError(ValueError):
    pass


# ---------------------------------------------------------------- blockify

@dataclass(frozen=True)
class BlockifyMapping:
    blocking: tuple[int, ...]  # blocking variable of soft clause i (0-based)
    original_nvars: int
    nvars: int

    def to_json(self) -> str:
        return json.dumps({"original_nvars": self.original_nvars, "nvars": self.nvars,
                           "soft_to_blocking": list(self.blocking)}, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "BlockifyMapping":
        d = json.loads(text)
        return cls(tuple(d["soft_to_blocking"]), d["original_nvars"], d["nvars"])


def blockify(hard: Iterable[Clause], soft: Iterable[Clause], nvars: int = 0) -> tuple[Instance, BlockifyMapping]:
    """Turn soft clause ``C_i`` into hard ``C_i ∨ b_i`` with fresh ``b_i``."""
    hard = [c if isinstance(c, Clause) else Clause(c) for c in hard]
    soft = [c if isinstance(c, Clause) else Clause(c) for c in soft]
    base = max([nvars, Formula(hard).max_var(), Formula(soft).max_var()])
    blocking = tuple(range(base + 1, base + len(soft) + 1))
    clauses = hard + [Clause(list(c) + [b]) for c, b in zip(soft, blocking)]
    total = base + len(soft)
    return Instance(Formula(clauses), blocking, total), BlockifyMapping(blocking, base, total)


# ---------------------------------------------------------------- pigeonhole

@dataclass(frozen=True)
class BphpVars:
    m: int
    n: int

    def p(self, i: int, j: int) -> int:
        return (i - 1) * self.n + j

    def b(self, i: int) -> int:
        return self.m * self.n + i

    def bc(self, i: int, k: int, j: int) -> int:
        """Blocking variable of the injectivity clause for pigeons i<k in hole j."""
        m, n = self.m, self.n
        # pairs (i', k') before (i, k) in lexicographic order
        before = sum(m - i2 for i2 in range(1, i)) + (k - i - 1)
        return m * n + m + before * n + j

    @property
    def nvars(self) -> int:
        return self.m * self.n + self.m + self.m * (self.m - 1) // 2 * self.n


def _check_mn(m: int, n: int) -> None:
    if not (isinstance(m, int) and isinstance(n, int)) or n < 1 or m <= n:
        raise GenerationError("need m > n >= 1, got m=%r n=%r" % (m, n))


def gen_bphp(m: int, n: int) -> Instance:
    _check_mn(m, n)
    V = BphpVars(m, n)
    clauses = [Clause([V.p(i, j) for j in range(1, n + 1)] + [V.b(i)]) for i in range(1, m + 1)]
    blocking = [V.b(i) for i in range(1, m + 1)]
    for i in range(1, m + 1):
        for k in range(i + 1, m + 1):
            for j in range(1, n + 1):
                clauses.append(Clause([-V.p(i, j), -V.p(k, j), V.bc(i, k, j)]))
                blocking.append(V.bc(i, k, j))
    return Instance(Formula(clauses), tuple(sorted(blocking)), V.nvars)


def php_cnf(m: int, n: int) -> Formula:
    """Plain pigeonhole CNF: totality and injectivity, no blocking variables."""
    _check_mn(m, n)
    V = BphpVars(m, n)
    clauses = [Clause([V.p(i, j) for j in range(1, n + 1)]) for i in range(1, m + 1)]
    for i in range(1, m + 1):
        for k in range(i + 1, m + 1):
            for j in range(1, n + 1):
                clauses.append(Clause([-V.p(i, j), -V.p(k, j)]))
    return Formula(clauses)


# ---------------------------------------------------------------- symmetry

@dataclass(frozen=True)
class PermutationWitness:
    """A variable permutation; the step witness is ``¬C ∘ π``."""

    mapping: tuple[tuple[int, int], ...]

    def __init__(self, mapping: Mapping[int, int] | Iterable[tuple[int, int]]):
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        pairs = tuple(sorted((v, w) for v, w in items if v != w))
        keys = [v for v, _ in pairs]
        if len(set(keys)) != len(keys) or sorted(keys) != sorted(w for _, w in pairs):
            raise GenerationError("permutation is not a bijection on its support")
        if any(v <= 0 or w <= 0 for v, w in pairs):
            raise GenerationError("permutation entries must be positive variables")
        object.__setattr__(self, "mapping", pairs)

    @classmethod
    def swaps(cls, pairs: Iterable[tuple[int, int]]) -> "PermutationWitness":
        m = {}
        for a, b in pairs:
            m[a], m[b] = b, a
        return cls(m)

    def substitution(self) -> Substitution:
        return Substitution(dict(self.mapping))

    def witness(self, clause: Clause) -> Substitution:
        return compose(negation_of(clause), self.substitution())


class _SubsumptionIndex:
    def __init__(self, clauses: Iterable[Clause]):
        self.sets = {}
        self.by_lit: dict[int, list[frozenset]] = {}
        self.has_empty = False
        for c in clauses:
            s = frozenset(c)
            if not s:
                self.has_empty = True
            if s in self.sets:
                continue
            self.sets[s] = True
            for lit in c:
                self.by_lit.setdefault(lit, []).append(s)

    def subsumes(self, clause: Clause) -> bool:
        if self.has_empty:
            return True
        d = frozenset(clause)
        if d in self.sets:
            return True
        return any(s <= d for lit in clause for s in self.by_lit.get(lit, ()))


def make_symmetry_step(db: Formula | Iterable[Clause], inst: Instance, clause: Clause,
                       perm: PermutationWitness) -> Redundant:
    """``Redundant(C, ¬C∘π)`` after checking the symmetry conditions.

    The inclusion ``db↾¬C ⊇ (db ∪ {C})↾(¬C∘π)`` is checked up to
    subsumption: every right-hand clause must contain some left-hand one,
    which still implies the unit-propagation condition.
    """
    if clause.is_tautology:
        raise GenerationError("tautological clause")
    pi = dict(perm.mapping)
    for v, w in pi.items():
        if inst.is_blocking(v) != inst.is_blocking(w):
            raise GenerationError("permutation maps x%d and x%d across the blocking set" % (v, w))
    sigma = perm.witness(clause)
    if not satisfies(sigma, clause):
        raise GenerationError("¬C∘π does not satisfy C")
    db = db if isinstance(db, Formula) else Formula(db)
    lhs = _SubsumptionIndex(restrict_formula(db, negation_of(clause)).distinct())
    for d in db.distinct() + [clause]:
        img = restrict_clause(d, sigma)
        if img is not SATISFIED and not lhs.subsumes(img):
            raise GenerationError("inclusion fails on image %s of %s" % (list(img), list(d)))
    return Redundant(clause, sigma, RuleClass.SR)


# ---------------------------------------------------------------- lemma helpers

def derive_extension_clauses(db: Formula | Iterable[Clause], inst: Instance, b: int,
                             clause: Clause) -> list[Redundant]:
    """Clauses ``¬ℓ ∨ ¬b`` for every literal ℓ of ``clause``, making ``b ↔ ¬clause``."""
    db = db if isinstance(db, Formula) else Formula(db)
    host = Clause(list(clause) + [b])
    if host not in db or b in clause.variables:
        raise GenerationError("%s is not in the database" % (list(host),))
    occurrences = sum(n for c, n in db.items() if b in c.variables)
    if occurrences != 1:
        raise GenerationError("x%d occurs %d times in the database, expected once" % (b, occurrences))
    steps = []
    for lit in clause:
        w = Substitution({var(lit): TRUE if lit > 0 else FALSE, b: FALSE})
        steps.append(Redundant(Clause([-lit, -b]), w, RuleClass.LPR))
    return steps


def derive_negative_units(inst: Instance, alpha: Substitution, positives: Sequence[int],
                          db: Formula | None = None) -> list:
    """``¬b_j`` for every blocking variable outside ``positives``.

    Each goes through ``¬b_{i1} ∨ ... ∨ ¬b_{ik} ∨ ¬b_j`` with witness
    ``alpha``, then a RUP step against the positive units.  With ``db``
    given, ``alpha`` is also checked to satisfy it.
    """
    positives = list(positives)
    if len(set(positives)) != len(positives) or not all(inst.is_blocking(b) for b in positives):
        raise GenerationError("positives must be distinct blocking variables")
    if any(alpha.value(b) is not True for b in positives):
        raise GenerationError("alpha must set every positive blocking variable true")
    if cost_of(alpha, inst) != len(positives):
        raise GenerationError("alpha has cost %d, expected %d" % (cost_of(alpha, inst), len(positives)))
    if db is not None:
        bad = next((c for c in db.distinct() if not satisfies(alpha, c)), None)
        if bad is not None:
            raise GenerationError("alpha falsifies %s" % (list(bad),))
    prefix = [-b for b in positives]
    steps: list = []
    for b in inst.blocking:
        if b in positives:
            continue
        if positives:
            steps.append(Redundant(Clause(prefix + [-b]), alpha, RuleClass.PR))
            steps.append(Inferred(Clause([-b])))
        else:
            steps.append(Redundant(Clause([-b]), alpha, RuleClass.PR))
    return steps


# ---------------------------------------------------------------- BPHP proof

def gen_bphp_proof(m: int, n: int) -> Proof:
    _check_mn(m, n)
    inst = gen_bphp(m, n)
    V = BphpVars(m, n)
    db: list[Clause] = list(inst.hard)
    steps: list = []

    def emit(step):
        steps.append(step)
        db.append(step.clause)

    for i in range(1, m + 1):
        totality = Clause([V.p(i, j) for j in range(1, n + 1)])
        for s in derive_extension_clauses(db, inst, V.b(i), totality):
            emit(s)
    # collisions never help: pin every injectivity blocking variable to 0,
    # each time sending the larger pigeon k home
    for i in range(1, m + 1):
        for k in range(i + 1, m + 1):
            for j in range(1, n + 1):
                w = {V.bc(i, k, j): FALSE, V.b(k): TRUE}
                w.update({V.p(k, h): FALSE for h in range(1, n + 1)})
                emit(Redundant(Clause([-V.bc(i, k, j)]), Substitution(w), RuleClass.PR))
    for i in range(1, m + 1):
        for k in range(i + 1, m + 1):
            for j in range(1, n + 1):
                emit(Inferred(Clause([-V.p(i, j), -V.p(k, j)])))

    for r in range(n):
        M, N = m - r, n - r
        # some pigeon flies -> pigeon M flies
        for i in range(1, M):
            perm = PermutationWitness.swaps([(V.p(M, j), V.p(i, j)) for j in range(1, n + 1)]
                                            + [(V.b(M), V.b(i))])
            emit(make_symmetry_step(db, inst, Clause([-V.b(M), V.b(i)]), perm))
        # pigeon M flies somewhere -> it flies to hole N
        for j in range(1, N):
            perm = PermutationWitness.swaps([(V.p(k, j), V.p(k, N)) for k in range(1, m + 1)])
            emit(make_symmetry_step(db, inst, Clause([-V.p(M, j), V.p(M, N)]), perm))
        for k in range(1, M):
            emit(Inferred(Clause([-V.p(k, N)])))
        emit(Redundant(Clause([V.p(M, N)]), Substitution({V.p(M, N): TRUE, V.b(M): FALSE}), RuleClass.PR))
        emit(Inferred(Clause([-V.b(M)])))
        w = {V.p(M, N): TRUE, V.b(M): FALSE}
        w.update({V.p(M, j): FALSE for j in range(1, N)})
        for j in range(1, N):
            emit(Redundant(Clause([-V.p(M, j)]), Substitution(w), RuleClass.PR))
        for k in range(1, M):
            emit(Inferred(Clause([V.p(k, j) for j in range(1, N)] + [V.b(k)])))
    steps.append(Conclude("eq", m - n))
    return Proof(tuple(steps))


# ---------------------------------------------------------------- refutations by DPLL

def _refute(db: ClauseDatabase, rho: list[int], order: Sequence[int], out: list) -> None:
    """Emit RUP clauses, post-order over a DPLL tree, ending with ``¬rho``.

    Requires ``db ∧ rho`` to be unsatisfiable.
    """
    conflict, trail = db.propagate(rho)
    target = Clause([-lit for lit in rho])
    if not conflict:
        assigned = {var(lit) for lit in trail}
        x = next((v for v in order if v not in assigned), None)
        if x is None:
            raise GenerationError("assignment %s satisfies the formula" % (trail,))
        _refute(db, rho + [x], order, out)
        _refute(db, rho + [-x], order, out)
    if target not in db:
        out.append(Inferred(target))
        db.add(target)


def rup_refutation(formula: Formula, nvars: int | None = None) -> Proof:
    """A RUP refutation of an unsatisfiable formula, built from a DPLL tree."""
    nvars = formula.max_var() if nvars is None else nvars
    db = ClauseDatabase(formula.distinct())
    out: list = []
    _refute(db, [], list(range(1, nvars + 1)), out)
    return Proof(tuple(out))


def check_refutation(formula: Formula, proof: Proof, nvars: int | None = None) -> bool:
    nvars = max(formula.max_var(), nvars or 0)
    if not any(s.clause.is_empty for s in proof.derivation):
        return False
    inst = Instance(formula, (), nvars)
    return check_proof(inst, proof, with_flip=False, require_consistent=False).accepted


# ---------------------------------------------------------------- lifting

def lift_min_unsat(formula: Formula | Sequence[Clause], refutation: Proof,
                   alpha: Substitution | None = None) -> tuple[Instance, Proof]:
    """Lift a refutation of a minimally unsatisfiable formula to a cost-1 proof."""
    clauses = list(formula)
    plain = Formula(clauses)
    if not clauses:
        raise GenerationError("empty formula")
    if refutation.conclusion is not None:
        raise GenerationError("refutation must not carry a conclusion")
    if not check_refutation(plain, refutation):
        raise GenerationError("refutation is not an accepted derivation of the empty clause")
    nv = plain.max_var()
    inst, mapping = blockify([], clauses, nv)
    B = list(mapping.blocking)
    bm = B[-1]
    if alpha is None:
        base = sat_solve(Formula(clauses[:-1]), nv)
        if base is None:
            raise GenerationError("formula minus its last clause is unsatisfiable; not minimally unsatisfiable")
        img = {v: base(v) for v in range(1, nv + 1)}
        img.update({b: FALSE for b in B[:-1]})
        img[bm] = TRUE
        alpha = Substitution(img)
    if any(alpha.value(v) is None for v in range(1, inst.nvars + 1)):
        raise GenerationError("alpha must be total over the lifted instance")
    if alpha.value(bm) is not True or cost_of(alpha, inst) != 1:
        raise GenerationError("alpha must set exactly the last blocking variable true")
    if not all(satisfies(alpha, c) for c in inst.hard.distinct()):
        raise GenerationError("alpha does not satisfy the lifted instance")

    zeros = {b: FALSE for b in B}
    steps: list = []
    for s in refutation.derivation:
        clause = Clause(list(s.clause) + B)
        if isinstance(s, Inferred):
            steps.append(Inferred(clause))
        else:
            w = dict(s.witness.items())
            w.update(zeros)
            steps.append(Redundant(clause, Substitution(w), s.claimed))
    for b in B[:-1]:
        steps.append(Redundant(Clause([-b, bm]), alpha, RuleClass.PR))
    steps.append(Inferred(Clause([bm])))
    steps.extend(derive_negative_units(inst, alpha, [bm]))
    steps.append(Conclude("eq", 1))
    return inst, Proof(tuple(steps))


# ---------------------------------------------------------------- certification

CERTIFY_LIMIT = 14


def certify_by_enumeration(inst: Instance, limit: int = CERTIFY_LIMIT) -> Proof:
    """Exponential-size proof of the exact optimum, for tiny instances.

    Every satisfying assignment other than a chosen optimum is cut off with
    its full-width clause (witness: the optimum), after which each literal of
    the optimum is derived by RUP steps along a DPLL tree.
    """
    if inst.nvars > limit:
        raise ResourceLimitExceeded("%d variables exceed the certification limit %d" % (inst.nvars, limit))
    space = SolutionSpace(inst.nvars, inst.blocking, inst.hard.distinct(), limit=limit)
    optima = space.optimal_rows()
    if len(optima) == 0:
        raise GenerationError("hard clauses are unsatisfiable")
    best_row = int(optima[0])
    alpha = space.assignment(best_row)
    steps: list = []
    db = ClauseDatabase(inst.hard.distinct())
    for row in space.satisfying_rows():
        row = int(row)
        if row == best_row:
            continue
        gamma = space.assignment(row)
        clause = Clause([-v if gamma.value(v) else v for v in range(1, inst.nvars + 1)])
        steps.append(Redundant(clause, alpha, RuleClass.SPR))
        db.add(clause)
    order = list(range(1, inst.nvars + 1))
    for v in order:
        lit = v if alpha.value(v) else -v
        _refute(db, [-lit], order, steps)
    steps.append(Conclude("eq", cost_of(alpha, inst)))
    return Proof(tuple(steps))


# ---------------------------------------------------------------- Hamming family

@dataclass(frozen=True)
class HammingVars:
    n: int

    def x(self, i: int) -> int:
        return i + 1

    def y(self, i: int) -> int:
        return self.n + 2 + i

    def b(self, i: int) -> int:
        return 2 * self.n + 2 + i

    @property
    def nvars(self) -> int:
        return 4 * self.n + 2


def gen_hamming_family(n: int) -> Instance:
    """Two far-apart optima: x0 ≠ y0, every x_i copies x0, every y_i copies y0,
    and each true x_i or y_i costs one."""
    if not isinstance(n, int) or n < 1:
        raise GenerationError("need n >= 1, got %r" % (n,))
    V = HammingVars(n)
    x0, y0 = V.x(0), V.y(0)
    clauses = [Clause([x0, y0]), Clause([-x0, -y0])]
    for i in range(1, n + 1):
        for a0, ai in ((x0, V.x(i)), (y0, V.y(i))):
            clauses.append(Clause([-a0, ai]))
            clauses.append(Clause([a0, -ai]))
    for i in range(1, n + 1):
        clauses.append(Clause([-V.x(i), V.b(i)]))
        clauses.append(Clause([-V.y(i), V.b(i + n)]))
    return Instance(Formula(clauses), tuple(V.b(i) for i in range(1, 2 * n + 1)), V.nvars)
