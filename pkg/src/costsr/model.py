"""Value types: literals, clauses, clause multisets, substitutions, instances.

Literals are nonzero signed integers in the DIMACS convention (``3`` is x3,
``-3`` is its negation).  Everything here is immutable once built.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union


class Const(enum.Enum):
    """Boolean constants used as substitution images."""

    FALSE = "f"
    TRUE = "t"

    def __repr__(self) -> str:
        return self.value

    def __invert__(self) -> "Const":
        return Const.TRUE if self is Const.FALSE else Const.FALSE


FALSE = Const.FALSE
TRUE = Const.TRUE

Image = Union[int, Const]


class _Satisfied:
    __slots__ = ()

    def __repr__(self) -> str:
        return "SATISFIED"

    def __reduce__(self):
        return "SATISFIED"


#: Returned by :func:`restrict_clause` when the image clause is true.
SATISFIED = _Satisfied()


def var(lit: int) -> int:
    return lit if lit > 0 else -lit


def _lit_key(lit: int) -> tuple[int, int]:
    return (lit if lit > 0 else -lit, lit < 0)


class Clause(tuple):
    """A duplicate-free disjunction of literals in canonical order.

    Literals are sorted by variable, positive before negative, so two
    clauses over the same literals compare and hash equal.  Tautologies
    (x and -x both present) are representable; the empty clause is ``Clause()``.
    """

    __slots__ = ()

    def __new__(cls, lits: Iterable[int] = ()):
        lits = set(lits)
        if 0 in lits:
            raise ValueError("0 is not a literal")
        return super().__new__(cls, sorted(lits, key=_lit_key))

    @classmethod
    def _trusted(cls, lits: Iterable[int]) -> "Clause":
        # caller guarantees canonical order and no duplicates
        return tuple.__new__(cls, lits)

    @property
    def is_tautology(self) -> bool:
        return any(self[i] == -self[i + 1] for i in range(len(self) - 1))

    @property
    def is_empty(self) -> bool:
        return len(self) == 0

    @property
    def variables(self) -> frozenset[int]:
        return frozenset(var(lit) for lit in self)

    def __repr__(self) -> str:
        return "Clause(%s)" % list(self)

    def __str__(self) -> str:
        if not self:
            return "⊥"
        return " ∨ ".join(("¬x%d" % -lit) if lit < 0 else ("x%d" % lit) for lit in self)


BOTTOM = Clause()


class Formula:
    """An immutable multiset of clauses.

    ``len()`` and iteration count clauses with multiplicity; use
    :meth:`distinct` for the underlying set.
    """

    __slots__ = ("_counts", "_size", "_hash")

    def __init__(self, clauses: Iterable[Clause | Iterable[int]] = ()):
        counts: Counter[Clause] = Counter()
        for c in clauses:
            counts[c if isinstance(c, Clause) else Clause(c)] += 1
        self._counts = counts
        self._size = sum(counts.values())
        self._hash: int | None = None

    @classmethod
    def from_counts(cls, counts: Mapping[Clause, int]) -> "Formula":
        f = cls()
        f._counts = Counter({c: n for c, n in counts.items() if n > 0})
        f._size = sum(f._counts.values())
        return f

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[Clause]:
        for c, n in self._counts.items():
            for _ in range(n):
                yield c

    def __contains__(self, clause: object) -> bool:
        return clause in self._counts

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        return "Formula(%s)" % [list(c) for c in self]

    def count(self, clause: Clause) -> int:
        return self._counts.get(clause, 0)

    def distinct(self) -> list[Clause]:
        return list(self._counts)

    def items(self):
        return self._counts.items()

    def add(self, *clauses: Clause) -> "Formula":
        counts = Counter(self._counts)
        for c in clauses:
            counts[c if isinstance(c, Clause) else Clause(c)] += 1
        return Formula.from_counts(counts)

    def union(self, other: "Formula") -> "Formula":
        counts = Counter(self._counts)
        counts.update(other._counts)
        return Formula.from_counts(counts)

    def variables(self) -> frozenset[int]:
        return frozenset(var(lit) for c in self._counts for lit in c)

    def max_var(self) -> int:
        return max((var(lit) for c in self._counts for lit in c), default=0)


class Substitution:
    """Simultaneous substitution of variables by constants or literals.

    Variables missing from the map are fixed points.  Identity entries are
    dropped at construction, so two substitutions are equal iff they agree
    on every variable.
    """

    __slots__ = ("_map", "_hash")

    def __init__(self, mapping: Mapping[int, Image] | Iterable[tuple[int, Image]] = ()):
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        m: dict[int, Image] = {}
        for v, img in items:
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                raise ValueError("substitution keys must be positive variables, got %r" % (v,))
            if isinstance(img, bool) or not isinstance(img, (int, Const)):
                raise TypeError("image must be a Const or a nonzero literal, got %r" % (img,))
            if isinstance(img, int) and img == 0:
                raise ValueError("0 is not a literal")
            if img != v:
                m[v] = img
        self._map = m
        self._hash: int | None = None

    @classmethod
    def from_literals(cls, lits: Iterable[int]) -> "Substitution":
        """The assignment making every literal in ``lits`` true."""
        m: dict[int, Image] = {}
        for lit in lits:
            v, val = var(lit), (TRUE if lit > 0 else FALSE)
            if m.get(v, val) is not val:
                raise ValueError("contradictory literals for variable %d" % v)
            m[v] = val
        return cls(m)

    def __call__(self, v: int) -> Image:
        return self._map.get(v, v)

    def lit(self, lit: int) -> Image:
        """Image of a literal, with the image of -x being the negation of x's."""
        img = self._map.get(lit if lit > 0 else -lit)
        if img is None:
            return lit
        if lit > 0:
            return img
        return ~img if isinstance(img, Const) else -img

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Substitution):
            return NotImplemented
        return self._map == other._map

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __repr__(self) -> str:
        return "Substitution({%s})" % ", ".join("%d: %r" % kv for kv in sorted(self._map.items()))

    def __len__(self) -> int:
        return len(self._map)

    def items(self):
        return self._map.items()

    @property
    def moved(self) -> frozenset[int]:
        """Variables not mapped to themselves."""
        return frozenset(self._map)

    @property
    def is_identity(self) -> bool:
        return not self._map

    @property
    def is_assignment(self) -> bool:
        return all(isinstance(img, Const) for img in self._map.values())

    @property
    def domain(self) -> frozenset[int]:
        """Variables mapped to a constant."""
        return frozenset(v for v, img in self._map.items() if isinstance(img, Const))

    def variables(self) -> frozenset[int]:
        """Moved variables together with every variable occurring in an image."""
        vs = set(self._map)
        vs.update(var(img) for img in self._map.values() if isinstance(img, int))
        return frozenset(vs)

    def value(self, v: int) -> bool | None:
        img = self._map.get(v)
        if img is TRUE:
            return True
        if img is FALSE:
            return False
        return None


IDENTITY = Substitution()


def restrict_clause(clause: Clause, sigma: Substitution):
    """Image of ``clause`` under ``sigma``: :data:`SATISFIED` or a :class:`Clause`."""
    out: set[int] = set()
    for lit in clause:
        img = sigma.lit(lit)
        if img is TRUE:
            return SATISFIED
        if img is FALSE:
            continue
        if -img in out:
            return SATISFIED
        out.add(img)
    return Clause(out)


def restrict_formula(formula: Formula, sigma: Substitution) -> Formula:
    counts: Counter[Clause] = Counter()
    for c, n in formula.items():
        img = restrict_clause(c, sigma)
        if img is not SATISFIED:
            counts[img] += n
    return Formula.from_counts(counts)


def compose(sigma: Substitution, tau: Substitution) -> Substitution:
    """``sigma ∘ tau``: first apply ``tau``, then ``sigma`` to the result."""
    out: dict[int, Image] = {}
    for v in sigma.moved | tau.moved:
        img = tau(v)
        out[v] = img if isinstance(img, Const) else sigma.lit(img)
    return Substitution(out)


def negation_of(clause: Clause) -> Substitution:
    """The assignment falsifying every literal of a non-tautological clause."""
    if clause.is_tautology:
        raise ValueError("cannot negate tautological clause %s" % (list(clause),))
    return Substitution({var(lit): (FALSE if lit > 0 else TRUE) for lit in clause})


def satisfies(sigma: Substitution, clause: Clause) -> bool:
    return restrict_clause(clause, sigma) is SATISFIED


@dataclass(frozen=True)
class Instance:
    """Hard clauses of a MaxSAT instance encoded with blocking variables."""

    hard: Formula
    blocking: tuple[int, ...]
    nvars: int
    _blocking_set: frozenset[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        blocking = tuple(self.blocking)
        object.__setattr__(self, "blocking", blocking)
        if not isinstance(self.hard, Formula):
            object.__setattr__(self, "hard", Formula(self.hard))
        if len(set(blocking)) != len(blocking):
            raise ValueError("blocking variables must be distinct")
        for b in blocking:
            if not 1 <= b <= self.nvars:
                raise ValueError("blocking variable %d outside 1..%d" % (b, self.nvars))
        if self.hard.max_var() > self.nvars:
            raise ValueError("clause variable %d exceeds nvars=%d" % (self.hard.max_var(), self.nvars))
        object.__setattr__(self, "_blocking_set", frozenset(blocking))

    def is_blocking(self, v: int) -> bool:
        return v in self._blocking_set

    @property
    def blocking_set(self) -> frozenset[int]:
        return self._blocking_set

    @property
    def m(self) -> int:
        return len(self.blocking)

    def with_clauses(self, *clauses: Clause) -> "Instance":
        return Instance(self.hard.add(*clauses), self.blocking, self.nvars)


def cost_of(alpha: Substitution | Mapping[int, bool], inst: Instance) -> int:
    """Number of blocking variables set true by a total assignment."""
    if isinstance(alpha, Substitution):
        if not alpha.is_assignment or any(alpha.value(v) is None for v in range(1, inst.nvars + 1)):
            raise ValueError("cost_of needs a total assignment over 1..%d" % inst.nvars)
        return sum(1 for b in inst.blocking if alpha.value(b))
    missing = [v for v in range(1, inst.nvars + 1) if v not in alpha]
    if missing:
        raise ValueError("assignment misses variables %s" % missing[:5])
    return sum(1 for b in inst.blocking if alpha[b])


def assignment_from_bits(bits: Iterable[bool | int], start: int = 1) -> Substitution:
    """Total assignment from a bit sequence for variables ``start, start+1, ...``."""
    return Substitution({v: (TRUE if b else FALSE) for v, b in enumerate(bits, start)})
