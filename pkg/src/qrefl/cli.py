"""Command-line entry point: ``qrefl <command> ...``.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on usage or input errors.  Reports are JSON on standard output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from qrefl.characters import (
    CharacterMatrix,
    NotProportional,
    check_grassmann_invariance,
    check_invertibility_criterion,
    cylinder_scale,
    grassmann_matrix,
    match_grassmann,
    omega_from_character,
    qdet_monomial_oracle,
)
from qrefl.noumi import (
    build_k_operator,
    check_centrality_bf,
    check_centrality_bs,
    grassmann_coideal_generators,
)
from qrefl.rea import (
    Report,
    check_braid,
    check_hecke,
    check_operator_reflection,
    check_qybe,
    check_reflection,
    reflection_r_prime,
    type_b_rep,
)
from qrefl.scalar import ParseError, Scalar, parse_scalar, print_scalar
from qrefl.tensorlin import TensorOperator
from qrefl.uqsln import r_matrix, rhat

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
VARIANTS = ("r", "rbar21")


class UsageError(Exception):
    pass


# ------------------------------------------------------------ documents

def load_matrix_document(text):
    """Parse a MatrixDocument; raises :class:`UsageError` on any defect."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError("document must be a JSON object")
    for key in ("n", "root_order", "entries"):
        if key not in doc:
            raise UsageError(f"missing field {key!r}")
    n, N = doc["n"], doc["root_order"]
    variant = doc.get("variant", "r")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise UsageError("n must be a positive integer")
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise UsageError("root_order must be a positive integer")
    if variant not in VARIANTS:
        raise UsageError(f"variant must be one of {VARIANTS}")
    rows = doc["entries"]
    if not isinstance(rows, list) or len(rows) != n or any(
        not isinstance(r, list) or len(r) != n for r in rows
    ):
        raise UsageError(f"entries must be an {n}x{n} array")
    parsed = []
    for i, row in enumerate(rows, 1):
        line = []
        for j, cell in enumerate(row, 1):
            if not isinstance(cell, str):
                raise UsageError(f"entry ({i},{j}) must be a string")
            try:
                line.append(parse_scalar(cell, N))
            except ParseError as exc:
                raise UsageError(f"entry ({i},{j}): {exc}") from None
        parsed.append(line)
    op = TensorOperator(n, 1, [{j: v for j, v in enumerate(r) if v} for r in parsed], N)
    return CharacterMatrix(op, variant)


def emit_matrix_document(M, root_order=None):
    N = M.root_order if root_order is None else root_order
    op = M.matrix.with_root_order(N) if N != M.root_order else M.matrix
    doc = {
        "n": M.n,
        "root_order": N,
        "variant": M.variant,
        "entries": [[print_scalar(v) for v in row] for row in op.entries],
    }
    return _dumps(doc)


def _dumps(doc):
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _witness_doc(w):
    return {
        "row": list(w.row),
        "col": list(w.col),
        "lhs": print_scalar(w.lhs),
        "rhs": print_scalar(w.rhs),
        "residual": print_scalar(w.residual),
    }


def _check_doc(rep):
    out = {"relation": rep.relation, "passed": rep.passed}
    if rep.witness is not None:
        out["witness"] = _witness_doc(rep.witness)
    return out


def report_document(command, reports, values=None):
    checks = [_check_doc(r) for r in reports]
    return {
        "command": command,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
        "values": {k: print_scalar(v) if isinstance(v, Scalar) else str(v)
                   for k, v in (values or {}).items()},
    }


def _finish(doc, out):
    out.write(_dumps(doc))
    return EXIT_PASS if doc["passed"] else EXIT_FAIL


# --------------------------------------------------------- parallelism

def _threads():
    raw = os.environ.get("QREFL_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError("QREFL_THREADS must be an integer") from None


def _call(job):
    fn, args = job
    return fn(*args)


def run_jobs(jobs):
    """Evaluate ``(fn, args)`` jobs, in a process pool when QREFL_THREADS > 1; order is kept."""
    workers = min(_threads(), len(jobs))
    if workers <= 1:
        return [_call(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_call, jobs))


# ------------------------------------------------------------- commands

def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return load_matrix_document(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def cmd_verify_re(args, out):
    M = _read(args.input)
    variant = args.variant or M.variant
    rep = check_reflection(reflection_r_prime(M.n, variant), M)
    return _finish(report_document("verify-re", [rep], {"variant": variant}), out)


def cmd_qybe(args, out):
    n = args.n
    if not 2 <= n <= 4:
        raise UsageError("--n must lie in 2..4")
    reports = run_jobs([(check_qybe, (r_matrix(n),)), (check_braid, (rhat(n),)),
                        (check_hecke, (rhat(n),))])
    return _finish(report_document("qybe", reports, {"n": n}), out)


def cmd_qdet(args, out):
    M = _read(args.input)
    if M.variant != "r":
        raise UsageError("qdet is available for variant 'r' only")
    try:
        crit = check_invertibility_criterion(M)
    except NotProportional:
        rep = Report("qdet_proportional", False)
        return _finish(report_document("qdet", [rep]), out)
    values = {"qdet": crit.values["qdet"], "det": crit.values["det"]}
    reports = [crit]
    if args.oracle and M.n <= 3:
        oracle = qdet_monomial_oracle(M)
        values["qdet_oracle"] = oracle
        reports.append(Report("dual_route", oracle == crit.values["qdet"]))
    return _finish(report_document("qdet", reports, values), out)


def cmd_grassmann(args, out):
    if args.m < 1:
        raise UsageError("--m must be at least 1")
    n = 2 * args.m
    try:
        s = parse_scalar(args.s, n)
    except ParseError as exc:
        raise UsageError(f"--s: {exc}") from None
    M = grassmann_matrix(n, s)
    doc_text = emit_matrix_document(M, n)
    rep = check_grassmann_invariance(omega_from_character(M), s)
    report = report_document("grassmann", list(rep.parts), {"n": n, "s": s})
    if args.emit:
        try:
            with open(args.emit, "w", encoding="utf-8") as fh:
                fh.write(doc_text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.emit}: {exc.strerror}") from None
        return _finish(report, out)
    out.write(doc_text)
    sys.stderr.write(_dumps(report))
    return EXIT_PASS if report["passed"] else EXIT_FAIL


def cmd_central(args, out):
    M = _read(args.input)
    if M.variant != "r":
        raise UsageError("central is available for variant 'r' only")
    K = build_k_operator(M)
    jobs = [(check_operator_reflection, (K, r_matrix(M.n))), (check_centrality_bf, (K,))]
    values = {}
    match = match_grassmann(M)
    if match is not None:
        s, _ = match
        values["s"] = s
        jobs.append((check_centrality_bs, (K, grassmann_coideal_generators(M.n, s))))
    return _finish(report_document("central", run_jobs(jobs), values), out)


def cmd_braidb(args, out):
    M = _read(args.input)
    if args.strands < 2:
        raise UsageError("--strands must be at least 2")
    _, rep = type_b_rep(M.n, args.strands, cylinder_scale(M))
    return _finish(report_document("braidb", list(rep.parts), {"strands": args.strands}), out)


# ----------------------------------------------------------------- main

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="qrefl", description="Exact checks for reflection-equation data of U_q(sl_n).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify-re", help="check the reflection equation for a matrix document")
    v.add_argument("input")
    v.add_argument("--variant", choices=VARIANTS, default=None,
                   help="R' = R (r) or R' = R_21^{-1} (rbar21); defaults to the document's variant")
    v.set_defaults(func=cmd_verify_re)

    y = sub.add_parser("qybe", help="Yang-Baxter, braid and Hecke checks for r_matrix(n)")
    y.add_argument("--n", type=int, required=True)
    y.set_defaults(func=cmd_qybe)

    d = sub.add_parser("qdet", help="quantum determinant and invertibility criterion")
    d.add_argument("input")
    d.add_argument("--oracle", action="store_true", help="also evaluate the monomial expansion (n <= 3)")
    d.set_defaults(func=cmd_qdet)

    g = sub.add_parser("grassmann", help="emit the Gr(m,2m) K-matrix and check its Omega relations")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--s", default="s")
    g.add_argument("--emit", default=None, help="write the matrix document here (default: stdout)")
    g.set_defaults(func=cmd_grassmann)

    c = sub.add_parser("central", help="operator reflection equation and centrality of the q-trace")
    c.add_argument("input")
    c.set_defaults(func=cmd_central)

    b = sub.add_parser("braidb", help="type-B braid relations from the cylinder-scaled matrix")
    b.add_argument("input")
    b.add_argument("--strands", type=int, default=2)
    b.set_defaults(func=cmd_braidb)
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"qrefl: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
