"""Command-line front end.

Exit codes: 0 accepted / success, 1 rejected / unsatisfiable,
2 usage or format error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .export import export_veripb
from .formats import (
    FormatError,
    parse_any_instance,
    parse_cnf,
    parse_msr_proof,
    parse_proof,
    print_instance,
    print_proof,
)
from .gen import (
    GenerationError,
    blockify,
    gen_bphp,
    gen_bphp_proof,
    gen_hamming_family,
    lift_min_unsat,
    php_cnf,
    rup_refutation,
)
from .model import Instance
from .msr import check_msr_proof
from .oracle import (
    EXHAUSTIVE_LIMIT,
    NODE_LIMIT,
    UNSATISFIABLE,
    ResourceLimitExceeded,
    brute_cost,
    min_pairwise_hamming,
    optimal_assignments,
)
from .proof import check_proof

OK, REJECTED, USAGE, LIMIT = 0, 1, 2, 3
JSON_SCHEMA = "costsr.verdict/1"


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc.strerror or exc)) from None


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError("cannot write %s: %s" % (path, exc.strerror or exc)) from None


def _load_instance(path: str) -> Instance:
    return parse_any_instance(_read(path))[0]


def _threads() -> int:
    raw = os.environ.get("COSTSR_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError("COSTSR_THREADS must be a positive integer, got %r" % raw)
    return n


def _lits(alpha, nvars: int) -> str:
    return " ".join(str(v if alpha.value(v) else -v) for v in range(1, nvars + 1))


# ---------------------------------------------------------------- commands

def cmd_check(args) -> int:
    inst = _load_instance(args.instance)
    text = _read(args.proof)
    start = time.perf_counter()
    if args.msr:
        verdict = check_msr_proof(inst, parse_msr_proof(text))
    else:
        verdict = check_proof(inst, parse_proof(text), with_flip=args.stats or args.json)
    elapsed = time.perf_counter() - start
    if args.json:
        out = {
            "schema": JSON_SCHEMA,
            "verdict": "accepted" if verdict.accepted else "rejected",
            "bound": verdict.bound.kind if verdict.bound else None,
            "k": verdict.bound.k if verdict.bound else None,
            "failing_step": verdict.failing_step,
            "reason": verdict.reason,
            "stats": verdict.stats.to_dict(),
            "timing_ms": round(elapsed * 1000, 3),
        }
        print(json.dumps(out, sort_keys=True))
    else:
        if verdict.accepted:
            print("accepted " + (str(verdict.bound) if verdict.bound else "(no conclusion)"))
        else:
            print("rejected step %d: %s" % (verdict.failing_step, verdict.reason))
        if args.stats:
            st = verdict.stats
            print("steps " + " ".join("%s=%d" % kv for kv in sorted(st.counts.items())))
            print("max-width %d" % st.max_width)
            if not args.msr:
                print("max-flip %s" % (st.max_flip if st.max_flip is not None else "-"))
    return OK if verdict.accepted else REJECTED


def cmd_gen(args) -> int:
    params = args.params
    if args.family == "bphp":
        if len(params) != 2:
            raise UsageError("gen bphp needs M N")
        m, n = (_int_arg(p) for p in params)
        inst, proof = gen_bphp(m, n), (gen_bphp_proof(m, n) if args.proof else None)
        stem = "bphp_%d_%d" % (m, n)
    elif args.family == "hamming":
        if len(params) != 1:
            raise UsageError("gen hamming needs N")
        n = _int_arg(params[0])
        inst, proof = gen_hamming_family(n), None
        if args.proof:
            raise UsageError("no proof generator for the hamming family")
        stem = "hamming_%d" % n
    else:
        if len(params) == 3 and params[0] == "php":
            m, n = _int_arg(params[1]), _int_arg(params[2])
            formula = php_cnf(m, n)
            stem = "php_%d_%d_lifted" % (m, n)
        elif len(params) == 1:
            formula, _ = parse_cnf(_read(params[0]))
            stem = os.path.splitext(os.path.basename(params[0]))[0] + "_lifted"
        else:
            raise UsageError("gen minunsat-lift needs a CNF file or 'php M N'")
        refutation = parse_proof(_read(args.refutation)) if args.refutation else rup_refutation(formula)
        inst, proof = lift_min_unsat(formula, refutation)
        if not args.proof:
            proof = None
    prefix = args.out or stem
    _write(prefix + ".bcnf", print_instance(inst))
    written = [prefix + ".bcnf"]
    if proof is not None:
        _write(prefix + ".proof", print_proof(proof))
        written.append(prefix + ".proof")
    for path in written:
        print("wrote %s" % path)
    return OK


def _int_arg(tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise UsageError("expected an integer, got %r" % tok) from None


def cmd_cost(args) -> int:
    inst = _load_instance(args.instance)
    report = brute_cost(inst, exhaustive_limit=args.limit, node_limit=args.nodes)
    if report.cost is UNSATISFIABLE:
        print("unsatisfiable")
        return REJECTED
    print("cost %d" % report.cost)
    print("method %s" % report.method.value)
    print("witness %s" % _lits(report.witness, inst.nvars))
    if args.enumerate_optima:
        optima = optimal_assignments(inst, exhaustive_limit=args.limit, search_fallback=True,
                                     node_limit=args.nodes)
        print("optima %d" % len(optima))
        for alpha in optima:
            print("  " + "".join("1" if alpha.value(v) else "0" for v in range(1, inst.nvars + 1)))
        hd = min_pairwise_hamming(optima)
        print("min-hamming %s" % ("-" if hd == float("inf") else hd))
    return OK


def cmd_blockify(args) -> int:
    from .formats import parse_wcnf

    w = parse_wcnf(_read(args.wcnf))
    inst, mapping = blockify(w.hard, w.soft, w.nvars)
    prefix = args.out or os.path.splitext(os.path.basename(args.wcnf))[0]
    _write(prefix + ".bcnf", print_instance(inst))
    _write(prefix + ".map.json", mapping.to_json())
    print("wrote %s.bcnf (%d blocking variables)" % (prefix, inst.m))
    print("wrote %s.map.json" % prefix)
    return OK


def cmd_export(args) -> int:
    inst = _load_instance(args.instance)
    proof = parse_proof(_read(args.proof))
    verdict = check_proof(inst, proof, with_flip=False)
    if not verdict.accepted:
        print("rejected step %d: %s" % (verdict.failing_step, verdict.reason))
        return REJECTED
    script = export_veripb(inst, proof)
    if args.out:
        _write(args.out, script)
        print("wrote %s" % args.out)
    else:
        sys.stdout.write(script)
    return OK


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="costsr", description="Cost-aware redundancy proofs for MaxSAT.")
    ap.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a proof against an instance")
    p.add_argument("instance")
    p.add_argument("proof")
    p.add_argument("--msr", action="store_true", help="proof is a MaxSAT-resolution proof")
    p.add_argument("--stats", action="store_true", help="print step statistics")
    p.add_argument("--json", action="store_true", help="machine-readable verdict")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="generate an instance (and proof)")
    p.add_argument("family", choices=["bphp", "hamming", "minunsat-lift"])
    p.add_argument("params", nargs="*", help="bphp: M N; hamming: N; minunsat-lift: CNF file or 'php M N'")
    p.add_argument("--proof", action="store_true", help="also write the generated proof")
    p.add_argument("--refutation", help="minunsat-lift: refutation file (default: built by DPLL)")
    p.add_argument("--out", help="output path prefix")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("cost", help="exact optimum by the oracle")
    p.add_argument("instance")
    p.add_argument("--enumerate-optima", action="store_true")
    p.add_argument("--limit", type=int, default=EXHAUSTIVE_LIMIT,
                   help="largest variable count enumerated exhaustively (default %(default)s)")
    p.add_argument("--nodes", type=int, default=NODE_LIMIT,
                   help="branch-and-bound node budget beyond the limit (default %(default)s)")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("blockify", help="convert unit-weight WCNF to BCNF")
    p.add_argument("wcnf")
    p.add_argument("--out", help="output path prefix")
    p.set_defaults(func=cmd_blockify)

    p = sub.add_parser("export", help="write a pseudo-Boolean proof script")
    p.add_argument("instance")
    p.add_argument("proof")
    p.add_argument("--out", help="output file (default: standard output)")
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        _threads()
        return args.func(args)
    except (UsageError, FormatError, GenerationError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE
    except ResourceLimitExceeded as exc:
        print("resource limit: %s" % exc, file=sys.stderr)
        return LIMIT


if __name__ == "__main__":
    sys.exit(main())
