"""Command-line interface: ``cqsl2 <command> (--r R | --q Q) [--format json|text]``.

Exit status is 0 on success, 1 when a computed check fails and 2 on usage
errors. JSON output is deterministic (sorted keys, no timings unless
``--timings`` is given).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from cqsl2.scalar import FieldContext, rational_q, root_of_unity, scalar_to_json
from cqsl2.verify import SCHEMA_VERSION

LABELS = "abcd"


def _parse_r(text: str) -> int:
    try:
        r = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"r must be an integer, got {text!r}")
    if r < 3 or r % 2 == 0:
        raise argparse.ArgumentTypeError("r must be odd and at least 3")
    return r


def _parse_q(text: str) -> Fraction:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"q must be a rational such as 3/2, got {text!r}")
    # mu = 1 - q^-2 and [2]_q = 1 + q appear as denominators
    if q in (0, 1, -1):
        raise argparse.ArgumentTypeError("q must not be 0 or +-1")
    return q


def _common(p: argparse.ArgumentParser, need_root: bool = False):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--r", type=_parse_r, help="odd order of the root of unity q")
    if not need_root:
        g.add_argument("--q", type=_parse_q, help="generic rational q, e.g. 3/2")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cqsl2", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("connection", help="canonical torsion/cotorsion-free connection")
    _common(p)
    p = sub.add_parser("riemann", help="Riemann curvature on the basic 1-forms")
    _common(p)
    p = sub.add_parser("ricci", help="Ricci tensor and its relation to the metric")
    _common(p)

    dirac = sub.add_parser("dirac", help="spin Dirac operator")
    dsub = dirac.add_subparsers(dest="dirac_command", required=True)
    p = dsub.add_parser("spectrum", help="eigenvalues and (generalized) eigenspace dimensions")
    _common(p, need_root=True)
    p.add_argument("--unnormalized", action="store_true", help="use the operator without the 1/mu factor")
    p = dsub.add_parser("modes", help="verify the listed r = 3 eigenmodes")
    _common(p, need_root=True)

    ver = sub.add_parser("verify", help="run the verification checks")
    vsub = ver.add_subparsers(dest="verify_command", required=True)
    p = vsub.add_parser("all", help="run every check applicable to the context")
    _common(p)
    p.add_argument("--deep", action="store_true", help="also run the long computations")
    return parser


def _context(args) -> FieldContext:
    if getattr(args, "r", None) is not None:
        return root_of_unity(args.r)
    return rational_q(args.q)


def _ctx_json(ctx: FieldContext):
    if ctx.r is not None:
        return {"mode": ctx.mode, "r": ctx.r}
    return {"mode": ctx.mode, "q": str(ctx.q_value)}


# --- commands: each returns (payload, ok, text_lines) -----------------------------------


def cmd_connection(ctx):
    from cqsl2.connection import cotorsion_residual, solve_constant, torsion_residual
    conn = solve_constant(ctx)
    m = conn.scalar_matrix()
    tors = all(t.is_zero() for t in torsion_residual(conn))
    cot = all(t.is_zero() for t in cotorsion_residual(conn))
    payload = {"connection": conn.to_json(), "torsion_free": tors, "cotorsion_free": cot, "unique": True}
    lines = []
    for i in range(4):
        terms = [f"({ctx.format(m[j][i])}) e_{LABELS[j]}" for j in range(4) if m[j][i]]
        lines.append(f"A_{LABELS[i]} = " + (" + ".join(terms) or "0"))
    lines.append(f"torsion free: {tors}; cotorsion free: {cot}")
    return payload, tors and cot, lines


def cmd_riemann(ctx):
    from cqsl2.curvature import riemann
    from cqsl2.calculus import basis1
    from cqsl2.qalgebra import algebra
    alg = algebra(ctx)
    out, lines = {}, []
    for i in range(4):
        R = riemann(basis1(alg, i))
        out[LABELS[i]] = R.to_json()
        lines.append(f"R(e_{LABELS[i]}) = {R!r}")
    return {"riemann": out}, True, lines


def cmd_ricci(ctx):
    from cqsl2.closed_forms import ricci_closed
    from cqsl2.curvature import InvariantTensor, metric, ricci, shifted_metric
    from cqsl2.scalar import q2_int
    R = ricci(ctx)
    factor = -2 * ctx.qpow(2) / q2_int(ctx, 4)
    shifted = shifted_metric(ctx)
    ok = R == shifted.scale(factor) and R == InvariantTensor.from_tensor(ricci_closed(ctx))
    payload = {"ricci": R.to_json(), "metric": metric(ctx).to_json(), "shifted_metric": shifted.to_json(),
               "factor": scalar_to_json(factor), "proportional": ok,
               "shifted_metric_degenerate": shifted.det() == 0}
    lines = [f"Ricci = {R!r}", f"Ricci = ({ctx.format(factor)}) * shifted metric: {ok}",
             f"shifted metric degenerate: {payload['shifted_metric_degenerate']}"]
    return payload, ok, lines


def cmd_spectrum(ctx, normalized):
    from cqsl2.dirac import spectrum, spectrum_checks
    entries = spectrum(ctx, normalized=normalized)
    chk = spectrum_checks(ctx, entries, normalized=normalized)
    ok = (chk["eigenvalue_count"] and chk["generalized_total"] and chk["matches_closed_form"]
          and chk["radius_spread"] < 1e-10 and chk["gap_spread"] < 1e-10)
    ents = []
    for e in entries:
        d = e.to_json()
        d["embedding"] = [round(x, 12) for x in d["embedding"]]
        ents.append(d)
    payload = {"normalized": normalized, "entries": ents,
               "checks": {k: (v if isinstance(v, bool) else v < 1e-10) for k, v in chk.items()}}
    lines = [f"m={e.m:2d}  lambda={ctx.format(e.eigenvalue)}  ~ {e.embedding.real:+.6f}{e.embedding.imag:+.6f}i"
             f"  dim={e.dim}  gen_dim={e.generalized_dim}  index={e.index}" for e in entries]
    lines.append(f"non-diagonalizable: {chk['non_diagonalizable']}; checks ok: {ok}")
    return payload, ok, lines


def cmd_modes(ctx):
    from cqsl2.dirac import verify_modes_r3
    rep = verify_modes_r3()
    payload = {"eigen_ok": rep.eigen_ok, "independent": rep.independent,
               "spans_eigenspaces": rep.spans_eigenspaces, "conjugation_closed": rep.conjugation_closed,
               "failures": [list(f) for f in rep.failures], "ok": rep.ok}
    lines = [f"lambda={lab}: {sum(v)}/{len(v)} modes verified, spans eigenspace: {rep.spans_eigenspaces[lab]}, "
             f"closed under conjugation: {rep.conjugation_closed[lab]}" for lab, v in rep.eigen_ok.items()]
    lines.append(f"linearly independent: {rep.independent}")
    return payload, rep.ok, lines


def cmd_verify(ctx, deep, timings):
    from cqsl2.verify import report_json, run_all
    results = run_all(ctx, deep=deep)
    payload = report_json(ctx, results, timings=timings)
    lines = []
    for r in results:
        t = f"  ({r.runtime:.2f}s)" if timings else ""
        note = f"  [{r.note}]" if r.note else ""
        lines.append(f"{r.status.upper():7s} {r.id:24s} {r.claim}{note}{t}")
    s = payload["summary"]
    lines.append(f"{s['passed']} passed, {s['failed']} failed, {s['skipped']} skipped")
    return payload, s["failed"] == 0, lines


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "dirac" and args.dirac_command == "modes" and args.r != 3:
        parser.error("the listed modes are only defined for --r 3")
    ctx = _context(args)
    t0 = time.perf_counter()
    if args.command == "connection":
        payload, ok, lines = cmd_connection(ctx)
    elif args.command == "riemann":
        payload, ok, lines = cmd_riemann(ctx)
    elif args.command == "ricci":
        payload, ok, lines = cmd_ricci(ctx)
    elif args.command == "dirac" and args.dirac_command == "spectrum":
        payload, ok, lines = cmd_spectrum(ctx, normalized=not args.unnormalized)
    elif args.command == "dirac":
        payload, ok, lines = cmd_modes(ctx)
    else:
        payload, ok, lines = cmd_verify(ctx, args.deep, args.timings)
    elapsed = time.perf_counter() - t0

    if args.format == "json":
        payload.setdefault("schema_version", SCHEMA_VERSION)
        payload.setdefault("context", _ctx_json(ctx))
        if args.timings:
            payload["elapsed"] = round(elapsed, 4)
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        print(f"# {ctx.label()}")
        for line in lines:
            print(line)
        if args.timings:
            print(f"# elapsed {elapsed:.2f}s")
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
