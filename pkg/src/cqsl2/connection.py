"""Spin connections: torsion / cotorsion equations, the canonical solution,
the covariant derivative and its compatibility checks."""

from __future__ import annotations

from dataclasses import dataclass

from cqsl2.calculus import (
    EB, EC, LABELS1, Tensor, ad_constants, basis1, d0, de_table, e_z,
    ker_tilde_pi_basis, partials, push_left_monomial, wedge11, wedge_table,
)
from cqsl2.linalg import ScalarMatrix
from cqsl2.qalgebra import AlgebraElement, algebra, counit
from cqsl2.scalar import FieldContext, q2_int

__all__ = [
    "Connection", "torsion_residual", "cotorsion_residual", "solve_constant",
    "solve_general", "GeneralSolution", "canonical", "nabla1", "nabla_basis",
    "skew_compat_residual", "nabla_on_tensor", "regularity_residual",
    "find_regularity_witness", "ConnectionError_",
]


class ConnectionError_(ValueError):
    """The connection system is inconsistent or has unexpected freedom."""


class Connection:
    """Four 1-forms A_i = sum_j A^j_i e_j (i = a, b, c, d)."""

    __slots__ = ("alg", "forms")

    def __init__(self, alg, forms):
        forms = list(forms)
        if len(forms) != 4 or any(f.legs != (1,) for f in forms):
            raise ValueError("a connection is four 1-forms")
        self.alg = alg
        self.forms = forms

    @classmethod
    def from_matrix(cls, ctx: FieldContext, A) -> "Connection":
        """From ``A[j][i]`` (scalars or algebra elements): coefficient of e_j in A_i."""
        alg = algebra(ctx)
        forms = []
        for i in range(4):
            terms = {}
            for j in range(4):
                v = A[j][i]
                v = v if isinstance(v, AlgebraElement) else alg.const(v)
                if v:
                    terms[(j,)] = v
            forms.append(Tensor(alg, (1,), terms))
        return cls(alg, forms)

    @classmethod
    def zero(cls, ctx: FieldContext) -> "Connection":
        alg = algebra(ctx)
        return cls(alg, [Tensor(alg, (1,)) for _ in range(4)])

    @property
    def ctx(self):
        return self.alg.ctx

    def component(self, j: int, i: int) -> AlgebraElement:
        return self.forms[i].component(j)

    def is_constant(self) -> bool:
        return all(f.is_constant() for f in self.forms)

    def scalar_matrix(self):
        """``M[j][i]`` as Scalars (constant connections only)."""
        return [[self.component(j, i).constant_term() for i in range(4)] for j in range(4)]

    def apply(self, v):
        """A(v) for a scalar 4-vector v on the invariant basis: sum_i v_i A_i."""
        out = Tensor(self.alg, (1,))
        for i, s in enumerate(v):
            if s:
                out = out + self.forms[i].scale(s)
        return out

    def __eq__(self, other):
        if not isinstance(other, Connection):
            return NotImplemented
        return self.forms == other.forms

    __hash__ = None

    def to_json(self):
        return {
            "components": {
                LABELS1[i]: {LABELS1[j]: self.component(j, i).to_json() for j in range(4)}
                for i in range(4)
            }
        }


def canonical(ctx: FieldContext) -> Connection:
    """A_a = alpha e_z = -A_d, A_b = beta e_b, A_c = beta e_c (closed form)."""
    alg = algebra(ctx)
    al = ctx.qpow(4) / q2_int(ctx, 4)
    be = (ctx.qpow(2) + ctx.qpow(-2)).inverse()
    ez = e_z(alg)
    return Connection(alg, [ez.scale(al), basis1(alg, EB).scale(be),
                            basis1(alg, EC).scale(be), ez.scale(-al)])


def _de_forms(ctx):
    alg = algebra(ctx)
    return [Tensor(alg, (2,), {(p,): alg.const(v) for p, v in t.items()}) for t in de_table(ctx)]


def torsion_residual(conn: Connection):
    """d e_i + sum_{j,k} ad_L(jk|i) A_j ^ e_k for i = a, b, c, d."""
    ctx = conn.ctx
    alg = conn.alg
    ad = ad_constants(ctx)
    out = []
    for i, de in enumerate(_de_forms(ctx)):
        acc = de
        for (j, k), s in ad.table("L", i).items():
            if conn.forms[j]:
                acc = acc + wedge11(conn.forms[j], basis1(alg, k)).scale(s)
        out.append(acc)
    return out


def cotorsion_residual(conn: Connection):
    """d e_i + sum_{j,k} ad_R(jk|i) e_j ^ A_k for i = a, b, c, d."""
    ctx = conn.ctx
    alg = conn.alg
    ad = ad_constants(ctx)
    out = []
    for i, de in enumerate(_de_forms(ctx)):
        acc = de
        for (j, k), s in ad.table("R", i).items():
            if conn.forms[k]:
                acc = acc + wedge11(basis1(alg, j), conn.forms[k]).scale(s)
        out.append(acc)
    return out


# --- linear systems ----------------------------------------------------------------


def _linear_columns(ctx: FieldContext, dim: int, torsion: bool, cotorsion: bool):
    """Columns of the linear part for unknowns A^l_i = monomial, plus the rhs.

    Unknown (l, i, idx) has column number (l*4 + i)*dim + idx; equation rows
    are (block, i', p, idx') flattened, with block 0 = torsion, 1 = cotorsion.
    """
    alg = algebra(ctx)
    W = wedge_table(ctx)
    ad = ad_constants(ctx)
    blocks = [b for b, on in ((0, torsion), (1, cotorsion)) if on]
    row_of = {}

    def row(block, i, p, idx):
        key = (block, i, p, idx)
        r = row_of.get(key)
        if r is None:
            r = len(row_of)
            row_of[key] = r
        return r

    # fix a deterministic row layout
    for bi, block in enumerate(blocks):
        for i in range(4):
            for p in range(6):
                for idx in range(dim):
                    row(bi, i, p, idx)

    columns = []
    for l in range(4):
        for i in range(4):
            for idx in range(dim):
                col: dict = {}

                def add(r, v):
                    s = col.get(r)
                    s = v if s is None else s + v
                    if s:
                        col[r] = s
                    else:
                        col.pop(r, None)

                for bi, block in enumerate(blocks):
                    if block == 0:
                        # (M e_l) ^ e_k, coefficient ad_L(i k | i')
                        for (j, k, ii), s in ad.left.items():
                            if j != i:
                                continue
                            for p, w in W[l][k].items():
                                add(row(bi, ii, p, idx), s * w)
                    else:
                        # e_j ^ (M e_l) = sum_t Delta_j^t(M) e_t ^ e_l
                        for (j, k, ii), s in ad.right.items():
                            if k != i:
                                continue
                            parts = push_left_monomial(alg, j, idx)
                            for t in range(4):
                                for jdx, g in parts[t].terms.items():
                                    for p, w in W[t][l].items():
                                        add(row(bi, ii, p, jdx), s * g * w)
                columns.append(col)
    rhs = [ctx.zero] * len(row_of)
    de = de_table(ctx)
    for bi in range(len(blocks)):
        for i in range(4):
            for p, v in de[i].items():
                rhs[row(bi, i, p, 0)] = -v
    return columns, rhs, len(row_of)


def _connection_from_vector(ctx, vec, dim):
    alg = algebra(ctx)
    A = [[alg.zero() for _ in range(4)] for _ in range(4)]
    for l in range(4):
        for i in range(4):
            base = (l * 4 + i) * dim
            terms = {idx: vec[base + idx] for idx in range(dim) if vec[base + idx]}
            A[l][i] = AlgebraElement(alg, terms)
    return Connection.from_matrix(ctx, A)


def solve_constant(ctx: FieldContext) -> Connection:
    """Unique constant solution of torsion = cotorsion = 0 (16 scalar unknowns)."""
    columns, rhs, nrows = _linear_columns(ctx, 1, True, True)
    mat = ScalarMatrix.from_columns(ctx, nrows, columns)
    ech = mat.echelon(rhs)
    if ech.inconsistent:
        raise ConnectionError_("torsion/cotorsion system has no constant solution")
    if ech.free_columns:
        raise ConnectionError_(f"constant solution not unique: {len(ech.free_columns)} free parameters")
    return _connection_from_vector(ctx, ech.particular_solution(), 1)


@dataclass
class GeneralSolution:
    """Affine solution space of a connection system over the reduced algebra."""

    ctx: FieldContext
    particular: Connection | None
    nullity: int
    rank: int
    unknowns: int
    equations: int

    @property
    def unique(self) -> bool:
        return self.particular is not None and self.nullity == 0


def solve_general(ctx: FieldContext, torsion: bool = True, cotorsion: bool = True) -> GeneralSolution:
    """Solve with all 16 components as unknown algebra elements (16 r^3 unknowns).

    ``cotorsion=False`` gives the torsion-only system.
    """
    if ctx.r is None:
        raise ValueError("solve_general needs a root-of-unity context")
    alg = algebra(ctx)
    dim = alg.dim
    columns, rhs, nrows = _linear_columns(ctx, dim, torsion, cotorsion)
    mat = ScalarMatrix.from_columns(ctx, nrows, columns)
    ech = mat.echelon(rhs)
    part = None if ech.inconsistent else _connection_from_vector(ctx, ech.particular_solution(), dim)
    return GeneralSolution(ctx=ctx, particular=part, nullity=len(ech.free_columns),
                           rank=ech.rank, unknowns=16 * dim, equations=nrows)


# --- covariant derivative -------------------------------------------------------------


def nabla_basis(conn: Connection, i: int) -> Tensor:
    """nabla e_i = -sum_{j,k} ad_L(jk|i) A_j (x) e_k."""
    alg = conn.alg
    out = Tensor(alg, (1, 1))
    for (j, k), s in ad_constants(conn.ctx).table("L", i).items():
        if conn.forms[j]:
            out = out - conn.forms[j].tensor(basis1(alg, k)).scale(s)
    return out


def nabla1(omega: Tensor, conn: Connection | None = None) -> Tensor:
    """nabla(sum f_i e_i) = sum d f_i (x) e_i + f_i nabla e_i."""
    if omega.legs != (1,):
        raise ValueError("nabla1 expects a 1-form")
    alg = omega.alg
    conn = conn or canonical(alg.ctx)
    out = Tensor(alg, (1, 1))
    for (i,), f in omega.terms.items():
        if not f.is_constant() or f.constant_term() != 0:
            out = out + d0(f).tensor(basis1(alg, i))
        out = out + nabla_basis(conn, i).lmul(f)
    return out


def skew_compat_residual(eta: Tensor, conn: Connection | None = None, literal: bool = False) -> Tensor:
    """Skew metric compatibility residual for a constant-coefficient eta.

    Default is the cotorsion form (d (x) id - id ^ nabla) eta. With
    ``literal=True`` the first term is (^ nabla) (x) id instead; the two
    agree whenever nabla is torsion free (^ nabla = d).
    """
    alg = eta.alg
    conn = conn or canonical(alg.ctx)
    nab = [nabla_basis(conn, i) for i in range(4)]
    de = _de_forms(alg.ctx)
    out = Tensor(alg, (2, 1))
    for (i, j), g in eta.scalar_terms().items():
        if literal:
            left = nab[i].tensor(basis1(alg, j)).wedge12()
        else:
            left = de[i].tensor(basis1(alg, j))
        right = basis1(alg, i).tensor(nab[j]).wedge12()
        out = out + (left - right).scale(g)
    return out


def nabla_on_tensor(t: Tensor, conn: Connection | None = None) -> Tensor:
    """Derivation extension of nabla to constant-coefficient Omega^1 (x) Omega^1.

    nabla(e_i (x) e_j) = nabla e_i (x) e_j + sum gamma (x) e_i (x) delta
    where nabla e_j = sum gamma (x) delta: the left-most output of nabla is
    kept at the far left.
    """
    if t.legs != (1, 1):
        raise ValueError("nabla_on_tensor expects a rank-2 tensor")
    alg = t.alg
    conn = conn or canonical(alg.ctx)
    nab = [nabla_basis(conn, i) for i in range(4)]
    out = Tensor(alg, (1, 1, 1))
    for (i, j), g in t.scalar_terms().items():
        first = nab[i].tensor(basis1(alg, j))
        second = Tensor(alg, (1, 1, 1), {(l, i, m): h for (l, m), h in nab[j].terms.items()})
        out = out + (first + second).scale(g)
    return out


# --- regularity --------------------------------------------------------------------------


def regularity_residual(f: AlgebraElement, conn: Connection | None = None, check_kernel: bool = True) -> Tensor:
    """sum_{i,j} A_i ^ A_j eps(d^i d^j f) for f in ker pi~."""
    alg = f.alg
    conn = conn or canonical(alg.ctx)
    first = partials(f)
    if check_kernel and any(counit(x) for x in first):
        raise ValueError("f is not in the kernel of pi~")
    out = Tensor(alg, (2,))
    for i in range(4):
        if not first[i]:
            continue
        second = partials(first[i])
        for j in range(4):
            s = counit(second[j])
            if s and conn.forms[i] and conn.forms[j]:
                out = out + wedge11(conn.forms[i], conn.forms[j]).scale(s)
    return out


def find_regularity_witness(ctx: FieldContext, conn: Connection | None = None):
    """First kernel basis element with nonzero regularity residual, or None."""
    for f in ker_tilde_pi_basis(ctx):
        res = regularity_residual(f, conn, check_kernel=False)
        if res:
            return f, res
    return None
