"""Reference closed-form expressions used as independent oracles.

Everything here is written down directly from known formulas and is never
used by the solvers themselves; tests and ``verify`` compare the computed
objects against these.
"""

from __future__ import annotations

from cqsl2.calculus import EA, EB, EC, ED, Tensor, basis1, e_z, theta, wedge11
from cqsl2.qalgebra import QAlgebra, algebra
from cqsl2.scalar import FieldContext, mu, q2_int, q_gauss, q_int

__all__ = [
    "alpha", "beta", "genextd", "tildepia", "exnabla", "riemann_closed",
    "ricci_closed", "metric_first_form", "metric_compact_form", "lift_table",
    "torsion_family", "MODES_R3", "offset_exact", "dirac_eigenvalue_closed",
]


def alpha(ctx: FieldContext):
    """q^4 / [4]_{q^2}."""
    return ctx.qpow(4) / q2_int(ctx, 4)


def beta(ctx: FieldContext):
    """1 / (q^2 + q^-2)."""
    return (ctx.qpow(2) + ctx.qpow(-2)).inverse()


def genextd(alg: QAlgebra, k: int, n: int, m: int):
    """d(c^k b^n d^m) as (coef_a, coef_b, coef_c, coef_d) from the closed form."""
    ctx = alg.ctx
    Q = ctx.qpow
    m_ = mu(ctx)
    mi = m_.inverse()
    q2 = lambda j: q2_int(ctx, j)  # noqa: E731
    mon = alg.monomial
    M = mon(k, n, m)
    cd = M.scale(mi * (Q(m + n - k) - 1))
    cb = mon(k - 1, n, m + 1, Q(n - k + 1) * q2(k))
    cc = (mon(k + 1, n, m - 1, Q(-k - n) * q2(m + n))
          + mon(k, n - 1, m - 1, Q(-k - n + 1) * q2(n)))
    ca = (M.scale(m_ * Q(-k - m - n + 2) * q2(k + 1) * q2(m + n))
          + mon(k - 1, n - 1, m, m_ * Q(-k - m - n + 3) * q2(n) * q2(k))
          + M.scale(mi * (Q(k - m - n) - 1)))
    return ca, cb, cc, cd


def tildepia(ctx: FieldContext):
    """pi~ of the generators a, b, c, d as scalar 4-vectors on (e_a, e_b, e_c, e_d).

    The displayed [2] here is the unbalanced 1 + q.
    """
    q = ctx.q
    two = q_gauss(ctx, 2)
    z = ctx.zero
    return {
        "a": [q * q / two, z, z, -q / two],
        "b": [z, z, ctx.one, z],
        "c": [z, ctx.one, z, z],
        "d": [(ctx.qpow(2) - ctx.qpow(-1) - 1) / two, z, z, ctx.qpow(2) / two],
    }


def exnabla(ctx: FieldContext, i: int) -> Tensor:
    """Covariant derivative of the basic 1-form e_i (canonical connection)."""
    alg = algebra(ctx)
    q2 = ctx.qpow(2)
    b_ = beta(ctx)
    four = q2_int(ctx, 4)
    ez = e_z(alg)
    eb, ec = basis1(alg, EB), basis1(alg, EC)
    if i in (EA, ED):
        t = ((eb @ ec) - (ec @ eb)).scale(b_) - (ez @ ez).scale(mu(ctx) * ctx.qpow(6) / four)
        return t if i == EA else -t
    if i == EB:
        return ((ez @ eb).scale(ctx.qpow(4) * (1 + ctx.qpow(-2)) / four)
                - (eb @ ez).scale(q2 * b_))
    if i == EC:
        return (-(ez @ ec).scale(ctx.qpow(4) * (1 + q2) / four) + (ec @ ez).scale(b_))
    raise ValueError(f"basis index must be 0..3, got {i}")


def riemann_closed(ctx: FieldContext, i: int) -> Tensor:
    """Riemann(e_i) for the canonical connection, as an Omega^2 (x) Omega^1 tensor."""
    alg = algebra(ctx)
    q = ctx.qpow
    pre = q(6) / (1 + q(4)) ** 2
    ez = e_z(alg)
    eb, ec = basis1(alg, EB), basis1(alg, EC)
    bz, cz, cb = wedge11(eb, ez), wedge11(ec, ez), wedge11(ec, eb)
    if i in (EA, ED):
        t = (cz @ eb) + (bz @ ec).scale(q(-2)) - (cb @ ez).scale(mu(ctx))
        t = t.scale(pre)
        return t if i == EA else -t
    if i == EB:
        return (-(bz @ ez) + (cb @ eb).scale(q(-2) * (1 + q(-2)))).scale(pre)
    if i == EC:
        return (-(cz @ ez) - (cb @ ec).scale(1 + q(-2))).scale(pre)
    raise ValueError(f"basis index must be 0..3, got {i}")


def metric_first_form(ctx: FieldContext, lam=None) -> Tensor:
    """e_c(x)e_b + q^2 e_b(x)e_c + (a-d block)/(1+q) + lam theta(x)theta.

    ``lam`` defaults to q(1 - q - q^2)/(1 + q).
    """
    alg = algebra(ctx)
    q = ctx.q
    two = q_gauss(ctx, 2)
    if lam is None:
        lam = q * (1 - q - q * q) / two
    ea, eb, ec, ed = (basis1(alg, i) for i in range(4))
    block = (ea @ ea) - (ea @ ed).scale(q) - (ed @ ea).scale(q) + (ed @ ed).scale(q * (q * q + q - 1))
    th = theta(alg)
    return (ec @ eb) + (eb @ ec).scale(ctx.qpow(2)) + block.scale(two.inverse()) + (th @ th).scale(lam)


def metric_compact_form(ctx: FieldContext) -> Tensor:
    """e_c(x)e_b + q^2 e_b(x)e_c + q^4/[2]_{q^2} (e_z(x)e_z - theta(x)theta)."""
    alg = algebra(ctx)
    eb, ec = basis1(alg, EB), basis1(alg, EC)
    ez, th = e_z(alg), theta(alg)
    return (ec @ eb) + (eb @ ec).scale(ctx.qpow(2)) + ((ez @ ez) - (th @ th)).scale(ctx.qpow(4) / q2_int(ctx, 2))


def ricci_closed(ctx: FieldContext) -> Tensor:
    """-(2 q^2/[4]_{q^2}) (eta + q^4/(1+q^2) theta(x)theta)."""
    alg = algebra(ctx)
    th = theta(alg)
    shifted = metric_compact_form(ctx) + (th @ th).scale(ctx.qpow(4) / (1 + ctx.qpow(2)))
    return shifted.scale(-2 * ctx.qpow(2) / q2_int(ctx, 4))


def lift_table(ctx: FieldContext):
    """Images of the self-dual / anti-self-dual combinations under the lift.

    Returns a list of ``(two_form_coeffs, image)`` pairs, where
    ``two_form_coeffs`` is a 6-vector on (ab, ac, bc, ad, bd, cd) and
    ``image`` is a dict {(i, j): Scalar} on Lambda^1 (x) Lambda^1.
    """
    q2 = ctx.qpow(2)
    qm2 = ctx.qpow(-2)
    m = mu(ctx)
    inv2 = q2_int(ctx, 2).inverse()
    one, z = ctx.one, ctx.zero
    a, b, c, d = EA, EB, EC, ED

    # e_cb = -e_bc
    rows = [
        ([z, one, z, z, z, z], {(a, c): q2 * inv2, (c, a): -inv2}),
        ([-m, z, z, z, one, z], {(b, d): q2 * inv2, (d, b): -q2 * inv2, (a, b): -q2 * m * inv2}),
        ([z, z, qm2, one, z, z], {(a, d): q2 * inv2, (d, a): -inv2, (b, c): inv2,
                                  (c, b): -inv2, (a, a): -m * inv2}),
        ([one, z, z, z, z, z], {(a, b): inv2, (b, a): -q2 * inv2}),
        ([z, z, z, z, z, one], {(c, d): inv2, (d, c): -inv2, (c, a): m * inv2}),
        ([z, z, -one, one, z, z], {(a, d): inv2, (d, a): -q2 * inv2, (c, b): inv2,
                                   (b, c): -inv2, (a, a): m * inv2}),
    ]
    return rows


def torsion_family(ctx: FieldContext, x, y, z):
    """General constant-coefficient solution of the torsion equation.

    Returns ``A[j][i]`` = coefficient of e_j in A_i. The source matrix is
    written in the index order (a, c, b, d) for both rows and columns.
    """
    q = ctx.qpow
    m = mu(ctx)
    four = q2_int(ctx, 4)
    x, y, z = (ctx.coerce(v) for v in (x, y, z))
    delta = (1 + q(6)) / four - x * (q(4) - q(2) + q(-2))
    order = (EA, EC, EB, ED)
    rows = [
        [x, q(2) * m * y, -q(-2) * m * z, -q(-2) * delta],
        [z, (q(4) + x * (1 - q(8))) / (1 + q(4)), ctx.zero, q(-6) * z],
        [y, ctx.zero, (1 + x * (q(6) - q(-2))) / (1 + q(4)), (q(4) - 1 + q(-2)) * y],
        [-q(2) * x, -q(4) * m * y, m * z, delta],
    ]
    A = [[ctx.zero] * 4 for _ in range(4)]
    for ri, j in enumerate(order):
        for ci, i in enumerate(order):
            A[j][i] = rows[ri][ci]
    return A


def offset_exact(ctx: FieldContext):
    """[3]_q / [4]_q (balanced q-integers)."""
    return q_int(ctx, 3) / q_int(ctx, 4)


def dirac_eigenvalue_closed(ctx: FieldContext, m: int):
    """q^2 [m]/[2] with the unbalanced q-integer (1 - q^m)/(1 - q)."""
    return ctx.qpow(2) * q_gauss(ctx, m) / q_gauss(ctx, 2)


# eigenvalue label -> list of (first component, second component); q-polynomial
# strings in the generators a, b, c, d, evaluated at r = 3.
MODES_R3 = {
    "0": [
        ("0", "1"), ("0", "b**2*d"), ("0", "b*d**2"), ("-b", "q*a"), ("-b**2*d", "b"),
        ("b*d**2", "d"), ("c*d**2", "q*c**2*d"),
        ("1", "0"), ("c**2*a", "0"), ("c*a**2", "0"), ("q**2*d", "-c"), ("c", "-c**2*a"),
        ("a", "c*a**2"), ("q**2*b**2*a", "b*a**2"),
    ],
    "-1": [
        ("0", "b"), ("0", "d"), ("0", "b**2*a"), ("b", "q**2*a"), ("1", "-c*d**2"),
        ("c*d**2", "-q**2*c**2*d"),
        ("c", "0"), ("a", "0"), ("c**2*d", "0"), ("q*d", "c"), ("-b*a**2", "1"),
        ("-q*b**2*a", "b*a**2"),
    ],
    "q^2": [
        ("0", "b**2"), ("0", "d**2"), ("0", "b*d"), ("-b**2", "q*b*a"), ("d**2", "-q**2*c*d"),
        ("-q**2*b*d", "c*b-1"),
        ("c**2", "0"), ("a**2", "0"), ("c*a", "0"), ("q**2*c*d", "-c**2"), ("-q*b*a", "a**2"),
        ("c*b-1", "-q*c*a"),
    ],
}
