"""Pseudo-Boolean proof script export.

Layout, one instruction per line::

    pseudo-Boolean proof version 2.0
    * objective min <1 x<b>>... ;
    f <number of hard clauses>
    u <pb-clause> ;                              RUP step
    red <pb-clause> ; <witness> ; begin          redundancy step
      objdiff <constant> [<c_v> x<v>]... ;       f↾σ - f under ¬C as a linear form
      vbound <c_v> x<v> <= <max(c_v,0)> ;        one per nonzero coefficient
      costbound <max_delta> <= 0 ;               constant + Σ vbound bounds
    end
    conclusion BOUNDS <lb> <ub|INF>
    end pseudo-Boolean proof

A clause ``l1 ∨ ... ∨ lk`` is written ``1 l1 ... 1 lk >= 1`` with literals
``x<v>`` / ``~x<v>``.  Witness entries are ``x<v> -> 0|1|x<w>|~x<w>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import FALSE, TRUE, Clause, Instance, Substitution
from .proof import Inferred, Proof, Redundant, check_proof

HEADER = "pseudo-Boolean proof version 2.0"
FOOTER = "end pseudo-Boolean proof"


class ExportError(ValueError):
    pass


def _pb_lit(lit: int) -> str:
    return ("x%d" % lit) if lit > 0 else ("~x%d" % -lit)


def _pb_clause(clause: Clause) -> str:
    return " ".join(["1 " + _pb_lit(lit) for lit in clause] + [">= 1"])


def _pb_witness(sigma: Substitution) -> str:
    parts = []
    for v, img in sorted(sigma.items()):
        if img is TRUE:
            rhs = "1"
        elif img is FALSE:
            rhs = "0"
        else:
            rhs = _pb_lit(img)
        parts.append("x%d -> %s" % (v, rhs))
    return " ".join(parts)


def export_veripb(inst: Instance, proof: Proof) -> str:
    verdict = check_proof(inst, proof, with_flip=False)
    if not verdict.accepted:
        raise ExportError("refusing to export a rejected proof (step %s: %s)"
                          % (verdict.failing_step, verdict.reason))
    out = [HEADER]
    out.append("* objective min %s ;" % " ".join("1 x%d" % b for b in inst.blocking))
    out.append("f %d" % len(inst.hard))
    for idx, step in enumerate(proof.derivation, 1):
        if isinstance(step, Inferred):
            out.append("u %s ;" % _pb_clause(step.clause))
            continue
        assert isinstance(step, Redundant)
        rep = verdict.reports[idx]
        out.append("red %s ; %s ; begin" % (_pb_clause(step.clause), _pb_witness(step.witness)))
        terms = " ".join("%d x%d" % (c, v) for v, c in sorted(rep.coefficients.items()))
        out.append("  objdiff %d%s ;" % (rep.constant, " " + terms if terms else ""))
        for v, c in sorted(rep.coefficients.items()):
            out.append("  vbound %d x%d <= %d ;" % (c, v, max(c, 0)))
        out.append("  costbound %d <= 0 ;" % rep.max_delta)
        out.append("end")
    if verdict.bound is not None:
        k = verdict.bound.k
        out.append("conclusion BOUNDS %d %s" % (k, k if verdict.bound.kind == "eq" else "INF"))
    else:
        out.append("conclusion NONE")
    out.append(FOOTER)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- re-parser

@dataclass
class ExportedStep:
    kind: str  # "u" or "red"
    clause: Clause
    witness: Substitution | None = None
    constant: int | None = None
    coefficients: dict[int, int] = field(default_factory=dict)
    costbound: int | None = None


@dataclass
class ExportedScript:
    objective: tuple[int, ...]
    nclauses: int
    steps: list[ExportedStep]
    conclusion: tuple[int, int | None] | None


def _parse_pb_lit(tok: str) -> int:
    neg = tok.startswith("~")
    body = tok[1:] if neg else tok
    if not body.startswith("x") or not body[1:].isdigit() or int(body[1:]) == 0:
        raise ExportError("bad literal %r" % tok)
    v = int(body[1:])
    return -v if neg else v


def _parse_pb_clause(toks: list[str]) -> Clause:
    if len(toks) < 2 or toks[-2:] != [">=", "1"] or len(toks) % 2:
        raise ExportError("bad clause constraint: %s" % " ".join(toks))
    lits = []
    for i in range(0, len(toks) - 2, 2):
        if toks[i] != "1":
            raise ExportError("clause coefficient must be 1")
        lits.append(_parse_pb_lit(toks[i + 1]))
    return Clause(lits)


def _parse_pb_witness(toks: list[str]) -> Substitution:
    if len(toks) % 3:
        raise ExportError("bad witness: %s" % " ".join(toks))
    pairs = []
    for i in range(0, len(toks), 3):
        v = _parse_pb_lit(toks[i])
        if v < 0 or toks[i + 1] != "->":
            raise ExportError("bad witness entry")
        rhs = toks[i + 2]
        img = TRUE if rhs == "1" else FALSE if rhs == "0" else _parse_pb_lit(rhs)
        pairs.append((v, img))
    return Substitution(pairs)


def _split_semis(line: str) -> list[list[str]]:
    return [part.split() for part in line.split(";")]


def parse_export(text: str) -> ExportedScript:
    """Re-read an exported script, checking its arithmetic as it goes."""
    lines = [ln.strip() for ln in text.splitlines()]
    if not lines or lines[0] != HEADER or lines[-1] != FOOTER:
        raise ExportError("missing header or footer")
    objective: tuple[int, ...] = ()
    nclauses = -1
    steps: list[ExportedStep] = []
    conclusion = None
    cur: ExportedStep | None = None
    for line in lines[1:-1]:
        toks = line.split()
        if not toks:
            continue
        head = toks[0]
        if cur is not None:
            if head == "objdiff":
                parts = _split_semis(line)
                body = parts[0][1:]
                cur.constant = int(body[0])
                for i in range(1, len(body), 2):
                    v = _parse_pb_lit(body[i + 1])
                    cur.coefficients[v] = int(body[i])
            elif head == "vbound":
                c, v, rhs = int(toks[1]), _parse_pb_lit(toks[2]), int(toks[4])
                if cur.coefficients.get(v) != c or rhs != max(c, 0):
                    raise ExportError("inconsistent vbound for x%d" % v)
            elif head == "costbound":
                cur.costbound = int(toks[1])
                expected = cur.constant + sum(max(c, 0) for c in cur.coefficients.values())
                if cur.costbound != expected or toks[2:] != ["<=", "0", ";"]:
                    raise ExportError("costbound %d does not follow from objdiff (%d)"
                                      % (cur.costbound, expected))
                if cur.costbound > 0:
                    raise ExportError("costbound is positive")
            elif head == "end":
                if cur.costbound is None:
                    raise ExportError("redundancy block without costbound")
                steps.append(cur)
                cur = None
            else:
                raise ExportError("unexpected line in redundancy block: %s" % line)
            continue
        if head == "*":
            if toks[1:3] == ["objective", "min"]:
                body = toks[3:-1]
                objective = tuple(_parse_pb_lit(body[i + 1]) for i in range(0, len(body), 2))
        elif head == "f":
            nclauses = int(toks[1])
        elif head == "u":
            parts = _split_semis(line[1:])
            steps.append(ExportedStep("u", _parse_pb_clause(parts[0])))
        elif head == "red":
            parts = _split_semis(line[3:])
            if len(parts) != 3 or parts[2] != ["begin"]:
                raise ExportError("bad redundancy line: %s" % line)
            cur = ExportedStep("red", _parse_pb_clause(parts[0]), _parse_pb_witness(parts[1]))
        elif head == "conclusion":
            if toks[1] == "BOUNDS":
                conclusion = (int(toks[2]), None if toks[3] == "INF" else int(toks[3]))
        else:
            raise ExportError("unknown instruction: %s" % line)
    if cur is not None:
        raise ExportError("unterminated redundancy block")
    return ExportedScript(objective, nclauses, steps, conclusion)
