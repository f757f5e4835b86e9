"""Registry of verification checks used by ``cqsl2 verify all``.

Each check returns ``(passed, artifacts)``; artifacts are JSON-ready values.
Checks are deterministic for a fixed field context, so reports can be
compared byte for byte (runtimes are only emitted on request).
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from cqsl2.calculus import (
    EA, EB, EC, ED, basis1, d0, d1, ker_tilde_pi_basis, partials, theta, tilde_pi,
)
from cqsl2.closed_forms import (
    exnabla, genextd, metric_compact_form, ricci_closed, riemann_closed, tildepia,
    torsion_family,
)
from cqsl2.scalar import FieldContext, mu, rational_q, root_of_unity, scalar_to_json

SCHEMA_VERSION = "1"

# rational sample points for the nabla(eta) = O(mu) check, and the pinned constant
O_MU_POINTS = ("11/10", "9/10", "101/100", "99/100")
O_MU_CONSTANT = 1


@dataclass
class CheckResult:
    id: str
    claim: str
    status: str  # pass | fail | skipped
    artifacts: dict = field(default_factory=dict)
    runtime: float = 0.0
    note: str = ""

    def to_json(self, timings: bool = False):
        out = {"id": self.id, "claim": self.claim, "status": self.status, "artifacts": self.artifacts}
        if self.note:
            out["note"] = self.note
        if timings:
            out["runtime"] = round(self.runtime, 4)
        return out


@dataclass(frozen=True)
class Check:
    id: str
    claim: str
    func: object
    roots_only: bool = False
    deep_from_r: int | None = None  # needs --deep when r >= this
    only_r: int | None = None


def _rng(ctx: FieldContext, salt: str) -> random.Random:
    return random.Random(f"{ctx.label()}:{salt}")


# --- algebra / calculus ----------------------------------------------------------------


def check_algebra(ctx):
    from cqsl2.qalgebra import algebra
    alg = algebra(ctx)
    a, b, c, d = (alg.generator(s) for s in "abcd")
    q = ctx.q
    rels = {
        "ba-qab": b * a - (a * b).scale(q), "ca-qac": c * a - (a * c).scale(q),
        "db-qbd": d * b - (b * d).scale(q), "dc-qcd": d * c - (c * d).scale(q),
        "cb-bc": c * b - b * c, "da-ad-qmu bc": d * a - a * d - (b * c).scale(q * mu(ctx)),
        "ad-q^-1 bc-1": a * d - (b * c).scale(q.inverse()) - 1,
    }
    r = ctx.r
    powers = {"a^r-1": a ** r - 1, "d^r-1": d ** r - 1, "b^r": b ** r, "c^r": c ** r}
    rng = _rng(ctx, "assoc")
    assoc_ok = True
    for _ in range(500):
        x, y, z = (alg.monomial(rng.randrange(r), rng.randrange(r), rng.randrange(r)) for _ in range(3))
        if (x * y) * z != x * (y * z):
            assoc_ok = False
            break
    zero = {k: v.is_zero() for k, v in {**rels, **powers}.items()}
    return all(zero.values()) and assoc_ok, {"relations_zero": zero, "associativity_500": assoc_ok}


def _monomial_sample(alg, rng, count):
    if count is None or count >= alg.dim:
        return list(range(alg.dim))
    return sorted(rng.sample(range(alg.dim), count))


def check_calculus(ctx):
    from cqsl2.qalgebra import AlgebraElement, algebra
    alg = algebra(ctx)
    rng = _rng(ctx, "calc")
    sample = _monomial_sample(alg, rng, None if ctx.r == 3 else 200)
    gen_ok = all(
        partials(AlgebraElement(alg, {i: ctx.one})) == genextd(alg, *alg.exponents(i)) for i in sample
    )
    d2_ok = all(d1(d0(AlgebraElement(alg, {i: ctx.one}))).is_zero() for i in range(alg.dim)) \
        if ctx.r == 3 else all(d1(d0(AlgebraElement(alg, {i: ctx.one}))).is_zero() for i in sample[:50])
    leib_ok = True
    for _ in range(200):
        f = _random_element(alg, rng, 3)
        g = _random_element(alg, rng, 3)
        if d0(f * g) != d0(f).rmul(g) + d0(g).lmul(f):
            leib_ok = False
            break
    tp = tildepia(ctx)
    pi_ok = {s: [tilde_pi(alg.generator(s)).component(i).constant_term() for i in range(4)] == tp[s]
             for s in "abcd"}
    ok = gen_ok and d2_ok and leib_ok and all(pi_ok.values())
    return ok, {"genextd": gen_ok, "monomials_checked": len(sample), "d_squared_zero": d2_ok,
                "leibniz_200": leib_ok, "tilde_pi": pi_ok}


def _random_element(alg, rng, terms):
    ctx = alg.ctx
    out = alg.zero()
    for _ in range(terms):
        idx = rng.randrange(alg.dim)
        coeff = ctx.from_coeffs([rng.randint(-3, 3) for _ in range(ctx.degree)])
        out = out + alg.monomial(*alg.exponents(idx), coeff)
    return out


# --- connection -----------------------------------------------------------------------


def check_connection_constant(ctx):
    from cqsl2.connection import canonical, cotorsion_residual, solve_constant, torsion_residual
    from cqsl2.connection import Connection
    A = solve_constant(ctx)
    canon = canonical(ctx)
    tors = all(t.is_zero() for t in torsion_residual(A))
    cotors = all(t.is_zero() for t in cotorsion_residual(A))
    fam = Connection.from_matrix(ctx, torsion_family(ctx, Fraction(2, 3), 5, -7))
    fam_ok = all(t.is_zero() for t in torsion_residual(fam))
    ok = A == canon and tors and cotors and fam_ok
    return ok, {"matches_closed_form": A == canon, "torsion_zero": tors, "cotorsion_zero": cotors,
                "torsion_family_zero": fam_ok, "connection": _matrix_json(A.scalar_matrix())}


def _matrix_json(m):
    labels = "abcd"
    return {f"{labels[j]}|{labels[i]}": scalar_to_json(m[j][i])
            for j in range(4) for i in range(4) if m[j][i]}


def check_connection_general(ctx):
    from cqsl2.connection import canonical, solve_general
    joint = solve_general(ctx)
    tors = solve_general(ctx, cotorsion=False)
    r3 = ctx.r ** 3
    ok = joint.unique and joint.particular == canonical(ctx) and tors.nullity == 3 * r3
    return ok, {"joint_nullity": joint.nullity, "particular_is_canonical": joint.particular == canonical(ctx),
                "torsion_only_nullity": tors.nullity, "expected_torsion_only": 3 * r3,
                "unknowns": joint.unknowns}


def check_regularity(ctx):
    from cqsl2.connection import find_regularity_witness
    hit = find_regularity_witness(ctx)
    kdim = len(ker_tilde_pi_basis(ctx))
    if hit is None:
        return False, {"kernel_dim": kdim, "witness": None}
    f, res = hit
    return True, {"kernel_dim": kdim, "witness": f.to_json(),
                  "residual_nonzero_components": len(res.terms)}


def check_nabla(ctx):
    from cqsl2.connection import nabla1, nabla_on_tensor, skew_compat_residual
    from cqsl2.qalgebra import algebra
    alg = algebra(ctx)
    th_ok = nabla1(theta(alg)).is_zero()
    ex = {"abcd"[i]: nabla1(basis1(alg, i)) == exnabla(ctx, i) for i in range(4)}
    tf = all(nabla1(basis1(alg, i)).wedge12() == d1(basis1(alg, i)) for i in range(4))
    skew = skew_compat_residual(metric_compact_form(ctx)).is_zero()
    o_mu = o_mu_report()
    q2 = rational_q(2)
    nz = not nabla_on_tensor(metric_compact_form(q2)).is_zero()
    ok = th_ok and all(ex.values()) and tf and skew and o_mu["bounded"] and nz
    return ok, {"nabla_theta_zero": th_ok, "exnabla": ex, "torsion_free": tf,
                "skew_compatible": skew, "nabla_eta_nonzero_q2": nz, "o_mu": o_mu}


def o_mu_report():
    from cqsl2.connection import nabla_on_tensor
    ratios = {}
    for q in O_MU_POINTS:
        c = rational_q(q)
        t = nabla_on_tensor(metric_compact_form(c))
        mx = max(abs(v.constant_term().c[0]) for v in t.terms.values())
        ratios[q] = float(mx / abs(mu(c).c[0]))
    return {"constant": O_MU_CONSTANT, "ratios": {k: round(v, 12) for k, v in ratios.items()},
            "bounded": all(v <= O_MU_CONSTANT for v in ratios.values())}


# --- curvature -----------------------------------------------------------------------


def check_riemann(ctx):
    from cqsl2.curvature import riemann
    from cqsl2.qalgebra import algebra
    alg = algebra(ctx)
    res = {"abcd"[i]: riemann(basis1(alg, i)) == riemann_closed(ctx, i) for i in range(4)}
    return all(res.values()), {"matches_closed_form": res}


def check_lift(ctx):
    from cqsl2.curvature import wedge_of_lift_is_identity
    from cqsl2.linalg import ScalarMatrix
    from cqsl2.closed_forms import lift_table
    sect = wedge_of_lift_is_identity(ctx)
    images = [img for _, img in lift_table(ctx)]
    cols = [{i * 4 + j: v for (i, j), v in img.items()} for img in images]
    rank_images = ScalarMatrix.from_columns(ctx, 16, cols).rank()
    kernel = _wedge_kernel(ctx)
    rank_total = ScalarMatrix.from_columns(ctx, 16, cols + kernel).rank()
    ok = sect and rank_images == 6 and len(kernel) == 10 and rank_total == 16
    return ok, {"wedge_after_lift_is_identity": sect, "image_rank": rank_images,
                "ker_wedge_dim": len(kernel), "combined_rank": rank_total}


def _wedge_kernel(ctx):
    from cqsl2.calculus import wedge_table
    from cqsl2.linalg import ScalarMatrix
    W = wedge_table(ctx)
    cols = []
    for i in range(4):
        for j in range(4):
            cols.append(dict(W[i][j]))
    mat = ScalarMatrix.from_columns(ctx, 6, cols)
    return [{k: v for k, v in enumerate(vec) if v} for vec in mat.nullspace()]


def check_ricci(ctx):
    from cqsl2.curvature import InvariantTensor, metric, metric_compact, quantum_trace, ricci, shifted_metric
    R = ricci(ctx)
    target = InvariantTensor.from_tensor(ricci_closed(ctx))
    u = quantum_trace(metric(ctx))
    q2 = ctx.qpow(2)
    expect_u = {EA: ctx.one, EC: q2, EB: q2.inverse(), ED: ctx.one}
    u_ok = all(u[j][k] == (expect_u[j] if j == k else 0) for j in range(4) for k in range(4))
    det0 = shifted_metric(ctx).det() == 0
    metric_ok = metric(ctx) == metric_compact(ctx) and metric(ctx).wedge().is_zero()
    ok = R == target and u_ok and det0 and metric_ok
    return ok, {"ricci_matches": R == target, "quantum_trace_ok": u_ok, "shifted_det_zero": det0,
                "metric_forms_agree_and_symmetric": metric_ok, "ricci": R.to_json()}


# --- Dirac ---------------------------------------------------------------------------


def check_aslash(ctx):
    from cqsl2.closed_forms import offset_exact
    from cqsl2.dirac import aslash
    A = aslash(ctx)
    off = offset_exact(ctx)
    ok = A[0][1] == 0 and A[1][0] == 0 and A[0][0] == -off and A[1][1] == -off
    return ok, {"diagonal": [scalar_to_json(A[0][0]), scalar_to_json(A[1][1])],
                "offdiagonal_zero": A[0][1] == 0 and A[1][0] == 0}


def check_spectrum(ctx):
    from cqsl2.dirac import offset_report, spectrum, spectrum_checks
    entries = spectrum(ctx)
    chk = spectrum_checks(ctx, entries)
    off = offset_report(ctx.r)
    ok = (chk["eigenvalue_count"] and chk["generalized_total"] and chk["matches_closed_form"]
          and chk["radius_spread"] < 1e-10 and chk["gap_spread"] < 1e-10 and off["agrees"])
    return ok, {"entries": [_rounded_entry(e) for e in entries],
                "checks": {k: (v if isinstance(v, bool) else v < 1e-10) for k, v in chk.items()},
                "offset": scalar_to_json(off["offset"]),
                "offset_embedding": round(off["embedding"].real, 10)}


def _rounded_entry(e):
    d = e.to_json()
    d["embedding"] = [round(x, 12) for x in d["embedding"]]
    return d


def check_offsets(ctx):
    from cqsl2.dirac import offset_report
    reps = {r: offset_report(r) for r in (3, 5, 7, 9)}
    ok = (reps[3]["offset"] == 0
          and abs(reps[5]["embedding"] - 0.6180339887498949) < 1e-10
          and reps[7]["offset"] == -1 and abs(reps[7]["embedding"] + 1) < 1e-10
          and abs(reps[9]["embedding"] - 2.53) < 0.01
          and all(rep["agrees"] for rep in reps.values()))
    return ok, {str(r): round(rep["embedding"].real, 10) for r, rep in reps.items()}


def check_modes(ctx):
    from cqsl2.dirac import spectrum, verify_modes_r3
    rep = verify_modes_r3()
    entries = spectrum(ctx)
    dims = {e.m: (e.dim, e.generalized_dim) for e in entries}
    # m = 0, 1, 2 give eigenvalues 0, -1, q^2 at r = 3
    dims_ok = [dims[0][0], dims[1][0], dims[2][0]] == [14, 12, 12]
    gen = sum(g for _, g in dims.values())
    eig = sum(d for d, _ in dims.values())
    ok = rep.ok and dims_ok and gen == 54 and gen - eig == 16
    return ok, {"dims": [dims[m][0] for m in range(3)], "generalized_total": gen,
                "deficiency": gen - eig, "modes_verified": sum(sum(v) for v in rep.eigen_ok.values()),
                "independent": rep.independent, "spans_eigenspaces": rep.spans_eigenspaces,
                "conjugation_closed": rep.conjugation_closed}


CHECKS = [
    Check("algebra.relations", "defining relations, truncation and associativity of the reduced algebra",
          check_algebra, roots_only=True),
    Check("calculus.soundness", "d against the closed form, d^2 = 0, Leibniz, pi~ on generators",
          check_calculus, roots_only=True),
    Check("connection.constant", "unique constant torsion- and cotorsion-free connection",
          check_connection_constant),
    Check("connection.uniqueness", "no further solutions with algebra-valued components",
          check_connection_general, roots_only=True, deep_from_r=5),
    Check("connection.regularity", "the canonical connection is not regular",
          check_regularity, roots_only=True, deep_from_r=7),
    Check("nabla.closed_form", "nabla on basic forms, nabla theta = 0, skew compatibility, nabla eta = O(mu)",
          check_nabla),
    Check("curvature.riemann", "Riemann curvature on the basic 1-forms", check_riemann),
    Check("curvature.lift", "the lift is a section of the wedge product", check_lift),
    Check("curvature.ricci", "Ricci is proportional to the shifted metric; quantum trace; degeneracy",
          check_ricci),
    Check("dirac.aslash", "connection term of the Dirac operator is -[3]/[4] times the identity",
          check_aslash, roots_only=True),
    Check("dirac.spectrum", "r eigenvalues on a circle matching the closed form",
          check_spectrum, roots_only=True, deep_from_r=7),
    Check("dirac.offsets", "curvature offset values for r = 3, 5, 7, 9", check_offsets, roots_only=True),
    Check("dirac.modes_r3", "r = 3 eigenspace dimensions, listed modes, non-diagonalisability",
          check_modes, roots_only=True, only_r=3),
]


def _skip_reason(check: Check, ctx: FieldContext, deep: bool):
    if check.roots_only and ctx.r is None:
        return "needs a root-of-unity context"
    if check.only_r is not None and ctx.r != check.only_r:
        return f"only defined at r={check.only_r}"
    if check.deep_from_r is not None and ctx.r is not None and ctx.r >= check.deep_from_r and not deep:
        return "long-running at this r; pass --deep"
    return ""


def run_check(check: Check, ctx: FieldContext, deep: bool = False) -> CheckResult:
    reason = _skip_reason(check, ctx, deep)
    if reason:
        return CheckResult(check.id, check.claim, "skipped", note=reason)
    t0 = time.perf_counter()
    try:
        ok, artifacts = check.func(ctx)
        status = "pass" if ok else "fail"
        note = ""
    except Exception as exc:  # a crashing check is a failing check
        status, artifacts, note = "fail", {}, f"{type(exc).__name__}: {exc}"
    return CheckResult(check.id, check.claim, status, artifacts, time.perf_counter() - t0, note)


def _run_by_id(args):
    cid, ctx_spec, deep = args
    ctx = context_from_spec(ctx_spec)
    check = next(c for c in CHECKS if c.id == cid)
    return run_check(check, ctx, deep)


def context_from_spec(spec):
    kind, val = spec
    return root_of_unity(int(val)) if kind == "r" else rational_q(val)


def context_spec(ctx: FieldContext):
    return ("r", ctx.r) if ctx.r is not None else ("q", str(ctx.q_value))


def workers() -> int:
    """Parallelism degree from CQSL2_WORKERS (default 1)."""
    try:
        return max(1, int(os.environ.get("CQSL2_WORKERS", "1")))
    except ValueError:
        return 1


def run_all(ctx: FieldContext, deep: bool = False, only=None):
    checks = [c for c in CHECKS if only is None or c.id in only]
    n = workers()
    if n == 1 or len(checks) == 1:
        return [run_check(c, ctx, deep) for c in checks]
    spec = context_spec(ctx)
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(_run_by_id, [(c.id, spec, deep) for c in checks]))


def report_json(ctx: FieldContext, results, timings: bool = False):
    failed = [r.id for r in results if r.status == "fail"]
    return {
        "schema_version": SCHEMA_VERSION,
        "context": {"mode": ctx.mode, **({"r": ctx.r} if ctx.r is not None else {"q": str(ctx.q_value)})},
        "checks": [r.to_json(timings) for r in results],
        "summary": {"passed": sum(r.status == "pass" for r in results),
                    "failed": len(failed), "skipped": sum(r.status == "skipped" for r in results),
                    "failed_ids": failed},
    }

