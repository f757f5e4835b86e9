"""Metric, Riemann curvature, the lift of 2-forms, quantum trace and Ricci."""

from __future__ import annotations

import functools

from cqsl2.calculus import EA, EB, EC, ED, LABELS1, Tensor, basis1, d1, e_z, theta, wedge_table
from cqsl2.closed_forms import lift_table
from cqsl2.connection import Connection, canonical, nabla1, nabla_basis
from cqsl2.linalg import ScalarMatrix
from cqsl2.qalgebra import algebra
from cqsl2.scalar import FieldContext, q2_int, q_gauss

__all__ = [
    "InvariantTensor", "metric", "metric_compact", "riemann", "lift_matrix", "lift_i",
    "selfdual_split", "quantum_trace", "ricci", "shifted_metric", "wedge_of_lift_is_identity",
]


class InvariantTensor:
    """Constant-coefficient element sum eta^{ij} e_i (x) e_j of Lambda^1 (x) Lambda^1."""

    __slots__ = ("ctx", "matrix")

    def __init__(self, ctx: FieldContext, matrix):
        self.ctx = ctx
        self.matrix = [[ctx.coerce(v) for v in row] for row in matrix]

    @classmethod
    def from_tensor(cls, t: Tensor) -> "InvariantTensor":
        if t.legs != (1, 1):
            raise ValueError("expected a rank-2 tensor of 1-forms")
        ctx = t.ctx
        m = [[ctx.zero] * 4 for _ in range(4)]
        for (i, j), v in t.scalar_terms().items():
            m[i][j] = v
        return cls(ctx, m)

    def to_tensor(self) -> Tensor:
        alg = algebra(self.ctx)
        return Tensor(alg, (1, 1), {(i, j): alg.const(v) for i, row in enumerate(self.matrix)
                                    for j, v in enumerate(row) if v})

    def __getitem__(self, ij):
        return self.matrix[ij[0]][ij[1]]

    def __eq__(self, other):
        if not isinstance(other, InvariantTensor):
            return NotImplemented
        return self.matrix == other.matrix

    __hash__ = None

    def __add__(self, other):
        return InvariantTensor(self.ctx, [[x + y for x, y in zip(r1, r2)]
                                          for r1, r2 in zip(self.matrix, other.matrix)])

    def scale(self, s):
        s = self.ctx.coerce(s)
        return InvariantTensor(self.ctx, [[s * x for x in row] for row in self.matrix])

    def as_matrix(self) -> ScalarMatrix:
        return ScalarMatrix.from_dense(self.ctx, self.matrix)

    def det(self):
        return self.as_matrix().det()

    def inverse_matrix(self):
        """eta_{ij}: the inverse of the component matrix, as a dense list."""
        return self.as_matrix().inverse().to_dense()

    def wedge(self) -> Tensor:
        """The 2-form obtained by wedging the two legs."""
        return self.to_tensor().wedge12()

    def to_json(self):
        from cqsl2.scalar import scalar_to_json
        return {LABELS1[i] + LABELS1[j]: scalar_to_json(v)
                for i, row in enumerate(self.matrix) for j, v in enumerate(row) if v}

    def __repr__(self):
        body = ", ".join(f"{LABELS1[i]}{LABELS1[j]}: {v}" for i, row in enumerate(self.matrix)
                         for j, v in enumerate(row) if v)
        return f"InvariantTensor({body})"


def metric(ctx: FieldContext, lam=None) -> InvariantTensor:
    """Killing metric with a free theta (x) theta coefficient ``lam``.

    eta = e_c(x)e_b + q^2 e_b(x)e_c
          + (e_a(x)e_a - q e_a(x)e_d - q e_d(x)e_a + q(q^2+q-1) e_d(x)e_d)/(1+q)
          + lam theta(x)theta,
    and ``lam`` defaults to q(1 - q - q^2)/(1 + q), where it coincides with
    :func:`metric_compact`.
    """
    q = ctx.q
    two = q_gauss(ctx, 2)
    if lam is None:
        lam = q * (1 - q - q * q) / two
    lam = ctx.coerce(lam)
    z = ctx.zero
    m = [[z] * 4 for _ in range(4)]
    m[EC][EB] = ctx.one
    m[EB][EC] = ctx.qpow(2)
    inv = two.inverse()
    m[EA][EA] = inv + lam
    m[EA][ED] = -q * inv + lam
    m[ED][EA] = -q * inv + lam
    m[ED][ED] = q * (q * q + q - 1) * inv + lam
    return InvariantTensor(ctx, m)


def metric_compact(ctx: FieldContext) -> InvariantTensor:
    """e_c(x)e_b + q^2 e_b(x)e_c + q^4/[2]_{q^2} (e_z(x)e_z - theta(x)theta)."""
    alg = algebra(ctx)
    ez, th = e_z(alg), theta(alg)
    eb, ec = basis1(alg, EB), basis1(alg, EC)
    t = (ec @ eb) + (eb @ ec).scale(ctx.qpow(2)) + ((ez @ ez) - (th @ th)).scale(ctx.qpow(4) / q2_int(ctx, 2))
    return InvariantTensor.from_tensor(t)


def shifted_metric(ctx: FieldContext) -> InvariantTensor:
    """eta + q^4/(1+q^2) theta (x) theta."""
    th = theta(algebra(ctx))
    shift = InvariantTensor.from_tensor(th @ th).scale(ctx.qpow(4) / (1 + ctx.qpow(2)))
    return metric(ctx) + shift


def quantum_trace(eta: InvariantTensor):
    """u^j_k = sum_i eta^{ij} eta_{ik} as a 4x4 list indexed [j][k]."""
    ctx = eta.ctx
    inv = eta.inverse_matrix()
    E = eta.matrix
    return [[sum((E[i][j] * inv[i][k] for i in range(4)), ctx.zero) for k in range(4)]
            for j in range(4)]


# --- Riemann ---------------------------------------------------------------------


def riemann(omega: Tensor, conn: Connection | None = None) -> Tensor:
    """((id ^ nabla) - d (x) id) nabla omega, in Omega^2 (x) Omega^1."""
    alg = omega.alg
    conn = conn or canonical(alg.ctx)
    nab = [nabla_basis(conn, k) for k in range(4)]
    first = nabla1(omega, conn)
    out = Tensor(alg, (2, 1))
    for (l, k), g in first.terms.items():
        xi = Tensor(alg, (1,), {(l,): g})
        out = out + xi.tensor(nab[k]).wedge12()
        out = out - d1(xi).tensor(basis1(alg, k))
    return out


# --- lift -------------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _change_of_basis(ctx: FieldContext):
    rows = lift_table(ctx)
    V = ScalarMatrix.from_columns(ctx, 6, [{p: v for p, v in enumerate(vec) if v} for vec, _ in rows])
    return rows, V


@functools.lru_cache(maxsize=None)
def lift_matrix(ctx: FieldContext):
    """i(e_P) for the six basis 2-forms, each as {(i, j): Scalar}."""
    rows, V = _change_of_basis(ctx)
    out = []
    for p in range(6):
        e = [ctx.zero] * 6
        e[p] = ctx.one
        coords = V.solve(e)
        img: dict = {}
        for c, (_, image) in zip(coords, rows):
            if not c:
                continue
            for key, v in image.items():
                s = img.get(key)
                img[key] = c * v if s is None else s + c * v
        out.append({k: v for k, v in img.items() if v})
    return tuple(out)


def lift_i(omega: Tensor, leg: int = 0) -> Tensor:
    """Apply the lift Lambda^2 -> Lambda^1 (x) Lambda^1 to leg ``leg`` (a 2-form leg)."""
    if omega.legs[leg] != 2:
        raise ValueError("lift_i acts on a 2-form leg")
    table = [{k: v for k, v in img.items()} for img in lift_matrix(omega.ctx)]
    return omega.map_leg(leg, table, (1, 1))


def selfdual_split(omega: Tensor):
    """Decompose a constant 2-form over the self-dual and anti-self-dual bases."""
    if omega.legs != (2,):
        raise ValueError("selfdual_split expects a 2-form")
    ctx = omega.ctx
    rows, V = _change_of_basis(ctx)
    vec = [omega.component(p).constant_term() if omega.component(p) else ctx.zero for p in range(6)]
    coords = V.solve(vec)
    alg = omega.alg
    parts = []
    for sel in (range(0, 3), range(3, 6)):
        acc = [ctx.zero] * 6
        for k in sel:
            for p, v in enumerate(rows[k][0]):
                acc[p] = acc[p] + coords[k] * v
        parts.append(Tensor(alg, (2,), {(p,): alg.const(v) for p, v in enumerate(acc) if v}))
    return parts[0], parts[1]


def wedge_of_lift_is_identity(ctx: FieldContext) -> bool:
    """Check wedge o i = id on all six basis 2-forms."""
    W = wedge_table(ctx)
    for p, img in enumerate(lift_matrix(ctx)):
        acc = {}
        for (i, j), v in img.items():
            for pp, w in W[i][j].items():
                acc[pp] = acc.get(pp, ctx.zero) + v * w
        acc = {k: v for k, v in acc.items() if v}
        if acc != {p: ctx.one}:
            return False
    return True


# --- Ricci -------------------------------------------------------------------------


def ricci(ctx: FieldContext, conn: Connection | None = None, eta: InvariantTensor | None = None) -> InvariantTensor:
    """Quantum-trace contraction sum_{j,k} u^j_k <f^k, i(Riemann(e_j))>."""
    alg = algebra(ctx)
    conn = conn or canonical(ctx)
    eta = eta or metric(ctx)
    u = quantum_trace(eta)
    m = [[ctx.zero] * 4 for _ in range(4)]
    for j in range(4):
        lifted = lift_i(riemann(basis1(alg, j), conn))
        for (l, a, b), g in lifted.scalar_terms().items():
            w = u[j][l]
            if w:
                m[a][b] = m[a][b] + w * g
    return InvariantTensor(ctx, m)



