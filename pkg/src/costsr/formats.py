"""Text formats: BCNF instances, WCNF input, cost-SR proofs, MSR proofs.

BCNF::

    p bcnf <nvars> <nclauses> <nblocking>
    b <var>... 0
    <lit>... 0

Proof lines::

    <lit>... 0                               inferred (RUP)
    <lit>... 0 w <var> <img> ... 0 [#tag]    redundant, img is t, f or a literal
    conclude geq <k> | conclude eq <k>

MSR proof lines::

    h <lit>... 0            hard clause by RUP
    hw <lit>... 0 w ... 0   hard clause by redundancy (same witness grammar)
    s+ <lit>... 0           copy a hard clause to the soft multiset
    sp <var> <lit>... 0     split soft C into C∨x, C∨¬x
    sm <var> <lit>... 0     merge soft C∨x, C∨¬x into C
    conclude bot <k>

``c`` lines are comments everywhere.  Printers emit canonical text, so
``print(parse(print(x)))`` is byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .model import FALSE, TRUE, Clause, Const, Formula, Instance, Substitution
from .proof import Conclude, Inferred, Proof, Redundant
from .msr import ConcludeBot, CopyToSoft, HardInfer, HardRedundant, Merge, MsrProof, Split
from .rules import RuleClass


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else "line %d: %s" % (line, message))


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") and (len(line) == 1 or line[1] in " \t"):
            continue
        if line.startswith("%"):
            continue
        yield no, line.split()


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError("expected an integer, got %r" % tok, no) from None


def _clause_tokens(toks: list[str], no: int) -> tuple[Clause, list[str]]:
    """Read literals up to the terminating 0; returns the clause and the rest."""
    lits = []
    for i, tok in enumerate(toks):
        lit = _int(tok, no)
        if lit == 0:
            return Clause(lits), toks[i + 1:]
        lits.append(lit)
    raise FormatError("unterminated clause (missing 0)", no)


# ---------------------------------------------------------------- instances

def parse_instance(text: str) -> Instance:
    header = None
    blocking: list[int] | None = None
    clauses: list[Clause] = []
    for no, toks in _lines(text):
        if toks[0] == "p":
            if header is not None:
                raise FormatError("duplicate header", no)
            if len(toks) != 5 or toks[1] != "bcnf":
                raise FormatError("malformed header, expected 'p bcnf <nvars> <nclauses> <nblocking>'", no)
            header = tuple(_int(t, no) for t in toks[2:])
            if min(header) < 0:
                raise FormatError("negative count in header", no)
            continue
        if header is None:
            raise FormatError("clause before header", no)
        nvars = header[0]
        if toks[0] == "b":
            if blocking is not None:
                raise FormatError("duplicate blocking declaration", no)
            decl, rest = _clause_tokens(toks[1:], no)
            if rest:
                raise FormatError("trailing tokens after blocking declaration", no)
            raw = [_int(t, no) for t in toks[1:-1]]
            if len(set(raw)) != len(raw):
                raise FormatError("blocking variable declared twice", no)
            for v in raw:
                if not 1 <= v <= nvars:
                    raise FormatError("blocking variable %d out of range 1..%d" % (v, nvars), no)
            blocking = raw
            continue
        clause, rest = _clause_tokens(toks, no)
        if rest:
            raise FormatError("trailing tokens after clause", no)
        for lit in clause:
            if abs(lit) > nvars:
                raise FormatError("variable %d out of range 1..%d" % (abs(lit), nvars), no)
        clauses.append(clause)
    if header is None:
        raise FormatError("missing header")
    nvars, nclauses, nblocking = header
    blocking = blocking or []
    if len(clauses) != nclauses:
        raise FormatError("header announces %d clauses, found %d" % (nclauses, len(clauses)))
    if len(blocking) != nblocking:
        raise FormatError("header announces %d blocking variables, found %d" % (nblocking, len(blocking)))
    return Instance(Formula(clauses), tuple(blocking), nvars)


def _clause_str(clause: Iterable[int]) -> str:
    return " ".join([str(lit) for lit in clause] + ["0"])


def print_instance(inst: Instance, comments: Iterable[str] = ()) -> str:
    out = ["c %s" % c for c in comments]
    out.append("p bcnf %d %d %d" % (inst.nvars, len(inst.hard), len(inst.blocking)))
    out.append("b " + _clause_str(inst.blocking))
    out.extend(_clause_str(c) for c in inst.hard)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- WCNF

class WeightedClauseError(FormatError):
    pass


@dataclass(frozen=True)
class Wcnf:
    hard: Formula
    soft: tuple[Clause, ...]
    nvars: int


def parse_wcnf(text: str) -> Wcnf:
    """Unit-weight WCNF, either the ``h``-prefixed dialect or the old ``p wcnf`` one."""
    hard: list[Clause] = []
    soft: list[Clause] = []
    top = None
    declared_nvars = 0
    for no, toks in _lines(text):
        if toks[0] == "p":
            if len(toks) < 4 or toks[1] != "wcnf":
                raise FormatError("malformed header, expected 'p wcnf <nvars> <nclauses> [top]'", no)
            declared_nvars = _int(toks[2], no)
            top = _int(toks[4], no) if len(toks) > 4 else None
            continue
        if toks[0] == "h":
            clause, rest = _clause_tokens(toks[1:], no)
            hard.append(clause)
        else:
            weight = _int(toks[0], no)
            clause, rest = _clause_tokens(toks[1:], no)
            if top is not None and weight >= top:
                hard.append(clause)
            elif weight != 1:
                raise WeightedClauseError("soft clause with weight %d; only unit weights are supported"
                                          % weight, no)
            else:
                soft.append(clause)
        if rest:
            raise FormatError("trailing tokens after clause", no)
    nvars = max([declared_nvars, Formula(hard).max_var(), Formula(soft).max_var()])
    return Wcnf(Formula(hard), tuple(soft), nvars)


# ---------------------------------------------------------------- witnesses

_TAGS = {"#" + rc.value: rc for rc in RuleClass}


def _parse_witness(toks: list[str], no: int) -> tuple[Substitution, list[str]]:
    pairs = []
    i = 0
    while True:
        if i >= len(toks):
            raise FormatError("unterminated witness (missing 0)", no)
        v = _int(toks[i], no)
        if v == 0:
            break
        if v < 0:
            raise FormatError("witness key must be a positive variable, got %d" % v, no)
        if i + 1 >= len(toks):
            raise FormatError("witness variable %d has no image" % v, no)
        tok = toks[i + 1]
        if tok == "t":
            img = TRUE
        elif tok == "f":
            img = FALSE
        else:
            img = _int(tok, no)
            if img == 0:
                raise FormatError("witness image 0 is not a literal", no)
        pairs.append((v, img))
        i += 2
    if len({v for v, _ in pairs}) != len(pairs):
        raise FormatError("witness maps a variable twice", no)
    return Substitution(pairs), toks[i + 1:]


def _witness_str(sigma: Substitution) -> str:
    toks = []
    for v, img in sorted(sigma.items()):
        toks.append(str(v))
        toks.append(img.value if isinstance(img, Const) else str(img))
    return " ".join(["w"] + toks + ["0"])


def _parse_redundant_tail(rest: list[str], no: int) -> tuple[Substitution, RuleClass]:
    if not rest or rest[0] != "w":
        raise FormatError("expected 'w' after clause", no)
    sigma, rest = _parse_witness(rest[1:], no)
    claimed = RuleClass.SR
    if rest:
        if len(rest) != 1 or rest[0] not in _TAGS:
            raise FormatError("unexpected tokens after witness: %s" % " ".join(rest), no)
        claimed = _TAGS[rest[0]]
    return sigma, claimed


# ---------------------------------------------------------------- cost-SR proofs

def _parse_conclude(toks: list[str], no: int, kinds: tuple[str, ...]) -> tuple[str, int]:
    if len(toks) != 3 or toks[1] not in kinds:
        raise FormatError("expected 'conclude %s <k>'" % "|".join(kinds), no)
    k = _int(toks[2], no)
    if k < 0:
        raise FormatError("negative bound", no)
    return toks[1], k


def parse_proof(text: str) -> Proof:
    steps = []
    concluded = False
    for no, toks in _lines(text):
        if concluded:
            raise FormatError("conclusion must be the last line", no)
        if toks[0] == "conclude":
            kind, k = _parse_conclude(toks, no, ("geq", "eq"))
            steps.append(Conclude(kind, k))
            concluded = True
            continue
        clause, rest = _clause_tokens(toks, no)
        if not rest:
            steps.append(Inferred(clause))
        else:
            sigma, claimed = _parse_redundant_tail(rest, no)
            steps.append(Redundant(clause, sigma, claimed))
    return Proof(tuple(steps))


def print_step(step) -> str:
    if isinstance(step, Inferred):
        return _clause_str(step.clause)
    if isinstance(step, Redundant):
        return "%s %s #%s" % (_clause_str(step.clause), _witness_str(step.witness), step.claimed.value)
    if isinstance(step, Conclude):
        return "conclude %s %d" % (step.bound, step.k)
    raise TypeError("not a proof step: %r" % (step,))


def print_proof(proof: Proof, comments: Iterable[str] = ()) -> str:
    out = ["c %s" % c for c in comments]
    out.extend(print_step(s) for s in proof.steps)
    return "\n".join(out) + "\n" if out else ""


# ---------------------------------------------------------------- MSR proofs

def parse_msr_proof(text: str) -> MsrProof:
    steps = []
    concluded = False
    for no, toks in _lines(text):
        if concluded:
            raise FormatError("conclusion must be the last line", no)
        tag, rest = toks[0], toks[1:]
        if tag == "conclude":
            _, k = _parse_conclude(toks, no, ("bot",))
            steps.append(ConcludeBot(k))
            concluded = True
        elif tag == "h":
            clause, tail = _clause_tokens(rest, no)
            if tail:
                raise FormatError("trailing tokens after clause", no)
            steps.append(HardInfer(clause))
        elif tag == "hw":
            clause, tail = _clause_tokens(rest, no)
            sigma, claimed = _parse_redundant_tail(tail, no)
            steps.append(HardRedundant(clause, sigma, claimed))
        elif tag == "s+":
            clause, tail = _clause_tokens(rest, no)
            if tail:
                raise FormatError("trailing tokens after clause", no)
            steps.append(CopyToSoft(clause))
        elif tag in ("sp", "sm"):
            if not rest:
                raise FormatError("missing variable after %s" % tag, no)
            v = _int(rest[0], no)
            if v <= 0:
                raise FormatError("split/merge variable must be positive", no)
            clause, tail = _clause_tokens(rest[1:], no)
            if tail:
                raise FormatError("trailing tokens after clause", no)
            steps.append((Split if tag == "sp" else Merge)(clause, v))
        else:
            raise FormatError("unknown MSR step tag %r" % tag, no)
    return MsrProof(tuple(steps))


def print_msr_step(step) -> str:
    if isinstance(step, HardInfer):
        return "h " + _clause_str(step.clause)
    if isinstance(step, HardRedundant):
        return "hw %s %s #%s" % (_clause_str(step.clause), _witness_str(step.witness), step.claimed.value)
    if isinstance(step, CopyToSoft):
        return "s+ " + _clause_str(step.clause)
    if isinstance(step, Split):
        return "sp %d %s" % (step.var, _clause_str(step.clause))
    if isinstance(step, Merge):
        return "sm %d %s" % (step.var, _clause_str(step.clause))
    if isinstance(step, ConcludeBot):
        return "conclude bot %d" % step.k
    raise TypeError("not an MSR step: %r" % (step,))


def print_msr_proof(proof: MsrProof) -> str:
    lines = [print_msr_step(s) for s in proof.steps]
    return "\n".join(lines) + "\n" if lines else ""


# ---------------------------------------------------------------- plain CNF

def parse_cnf(text: str) -> tuple[Formula, int]:
    """DIMACS CNF; returns the formula (clause order kept) and ``nvars``."""
    clauses: list[Clause] = []
    nvars = 0
    seen_header = False
    for no, toks in _lines(text):
        if toks[0] == "p":
            if len(toks) != 4 or toks[1] != "cnf" or seen_header:
                raise FormatError("malformed header, expected 'p cnf <nvars> <nclauses>'", no)
            nvars = _int(toks[2], no)
            seen_header = True
            continue
        clause, rest = _clause_tokens(toks, no)
        if rest:
            raise FormatError("trailing tokens after clause", no)
        clauses.append(clause)
    formula = Formula(clauses)
    return formula, max(nvars, formula.max_var())


def print_cnf(formula: Formula, nvars: int | None = None) -> str:
    nvars = formula.max_var() if nvars is None else nvars
    out = ["p cnf %d %d" % (nvars, len(formula))]
    out.extend(_clause_str(c) for c in formula)
    return "\n".join(out) + "\n"


def parse_any_instance(text: str):
    """BCNF as is, otherwise WCNF; returns ``(instance, mapping_or_None)``."""
    for _, toks in _lines(text):
        if toks[:2] == ["p", "bcnf"]:
            return parse_instance(text), None
        break
    from .gen import blockify
    w = parse_wcnf(text)
    return blockify(w.hard, w.soft, w.nvars)
