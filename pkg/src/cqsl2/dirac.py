"""Gamma matrices, the connection term and the Dirac operator on 2-spinors.

A spinor is a pair (psi^1, psi^2) of algebra elements. The operator acts on
the coefficient vector of length 2 r^3: index ``alpha * r^3 + idx``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from cqsl2.calculus import EA, EB, EC, ED, partials, tilde_pi
from cqsl2.closed_forms import MODES_R3, dirac_eigenvalue_closed, offset_exact
from cqsl2.connection import Connection, canonical
from cqsl2.linalg import ScalarMatrix
from cqsl2.qalgebra import AlgebraElement, algebra
from cqsl2.scalar import FieldContext, Scalar, complex_embed, mu, root_of_unity

__all__ = [
    "gamma", "GAMMA_INDEX", "aslash", "assemble", "DiracMatrix", "Spinor",
    "spectrum", "spectrum_checks", "candidate_eigenvalue", "SpectrumEntry", "listed_modes",
    "conjugate_element", "verify_modes_r3", "ModesReport", "charge_conjugate",
    "offset_report", "parse_mode",
]

# gamma(e_i) = E_{alpha beta}: e_a -> (0,0), e_b -> (0,1), e_c -> (1,0), e_d -> (1,1)
GAMMA_INDEX = {EA: (0, 0), EB: (0, 1), EC: (1, 0), ED: (1, 1)}
_BASIS_OF = {v: k for k, v in GAMMA_INDEX.items()}


def gamma(ctx: FieldContext, i: int):
    """2x2 elementary matrix assigned to e_i."""
    z, one = ctx.zero, ctx.one
    m = [[z, z], [z, z]]
    a, b = GAMMA_INDEX[i]
    m[a][b] = one
    return m


# t^alpha_beta and the inverse antipode on generators, as (coefficient, name)
_T = {(0, 0): "a", (0, 1): "b", (1, 0): "c", (1, 1): "d"}


def _s_inverse(ctx: FieldContext):
    return {"a": (ctx.one, "d"), "b": (-ctx.qpow(-1), "b"),
            "c": (-ctx.q, "c"), "d": (ctx.one, "a")}


def aslash(ctx: FieldContext, conn: Connection | None = None):
    """A-slash^alpha_beta = sum_gamma A(pi~ S^-1 t^gamma_beta)^alpha_gamma."""
    if ctx.r is None:
        raise ValueError("aslash needs a root-of-unity context")
    alg = algebra(ctx)
    conn = conn or canonical(ctx)
    sinv = _s_inverse(ctx)
    m = [[ctx.zero, ctx.zero], [ctx.zero, ctx.zero]]
    for beta in range(2):
        for gam in range(2):
            coef, name = sinv[_T[(gam, beta)]]
            pi = tilde_pi(alg.generator(name))
            v = [pi.component(i).constant_term() * coef for i in range(4)]
            form = conn.apply(v)
            for alpha in range(2):
                i = _BASIS_OF[(alpha, gam)]
                c = form.component(i)
                if not c.is_constant():
                    raise ValueError("aslash needs a constant connection")
                m[alpha][beta] = m[alpha][beta] + c.constant_term()
    return m


@dataclass
class Spinor:
    psi1: AlgebraElement
    psi2: AlgebraElement

    @property
    def alg(self):
        return self.psi1.alg

    def to_vector(self):
        alg = self.alg
        n = alg.dim
        vec = [alg.ctx.zero] * (2 * n)
        for a, comp in enumerate((self.psi1, self.psi2)):
            for idx, v in comp.terms.items():
                vec[a * n + idx] = v
        return vec

    @classmethod
    def from_vector(cls, alg, vec) -> "Spinor":
        n = alg.dim
        return cls(AlgebraElement(alg, {i: vec[i] for i in range(n) if vec[i]}),
                   AlgebraElement(alg, {i: vec[n + i] for i in range(n) if vec[n + i]}))

    def __eq__(self, other):
        return self.psi1 == other.psi1 and self.psi2 == other.psi2

    def scale(self, s):
        return Spinor(self.psi1.scale(s), self.psi2.scale(s))

    def to_json(self):
        return [self.psi1.to_json(), self.psi2.to_json()]


@dataclass
class DiracMatrix:
    ctx: FieldContext
    matrix: ScalarMatrix
    normalized: bool
    offset: Scalar | None = None
    _blocks: list | None = field(default=None, repr=False)

    def apply(self, s: Spinor) -> Spinor:
        return Spinor.from_vector(s.alg, self.matrix.apply(s.to_vector()))

    def blocks(self):
        if self._blocks is None:
            self._blocks = self.matrix.diagonal_blocks()
        return self._blocks


def assemble(ctx: FieldContext, normalized: bool = True, include_connection: bool = False) -> DiracMatrix:
    """Matrix of [[d^a, d^b], [d^c, d^d]] (minus A-slash when requested)."""
    if ctx.r is None:
        raise ValueError("the Dirac operator needs a root-of-unity context")
    alg = algebra(ctx)
    n = alg.dim
    rows = [dict() for _ in range(2 * n)]
    for idx in range(n):
        parts = partials(AlgebraElement(alg, {idx: ctx.one}), normalized)
        for i, p in enumerate(parts):
            alpha, beta = GAMMA_INDEX[i]
            col = beta * n + idx
            for jdx, v in p.terms.items():
                rows[alpha * n + jdx][col] = v
    mat = ScalarMatrix(ctx, 2 * n, 2 * n, rows)
    offset = None
    if include_connection:
        A = aslash(ctx)
        for alpha in range(2):
            for beta in range(2):
                s = A[alpha][beta]
                if not s:
                    continue
                for idx in range(n):
                    mat[alpha * n + idx, beta * n + idx] = mat[alpha * n + idx, beta * n + idx] - s
        if A[0][1] or A[1][0] or A[0][0] != A[1][1]:
            offset = None
        else:
            offset = -A[0][0]
    return DiracMatrix(ctx=ctx, matrix=mat, normalized=normalized, offset=offset)


# --- spectrum --------------------------------------------------------------------------


@dataclass
class SpectrumEntry:
    m: int
    eigenvalue: Scalar
    dim: int
    generalized_dim: int
    embedding: complex
    index: int = 0

    def to_json(self):
        from cqsl2.scalar import scalar_to_json
        return {"m": self.m, "eigenvalue": scalar_to_json(self.eigenvalue), "dim": self.dim,
                "generalized_dim": self.generalized_dim, "index": self.index,
                "embedding": [self.embedding.real, self.embedding.imag]}


def _nullities(block: ScalarMatrix, lam: Scalar):
    """(nullity of B - lam, stable nullity of its powers, power where it stabilises)."""
    N = block.shift(-lam)
    n = N.nrows
    first = n - N.rank()
    if first == 0:
        return 0, 0, 0
    prev, power, P = first, 1, N
    while power < n:
        P = P @ N
        cur = n - P.rank()
        if cur == prev:
            break
        prev = cur
        power += 1
    return first, prev, power


def candidate_eigenvalue(ctx: FieldContext, m: int, normalized: bool = True) -> Scalar:
    v = ctx.qpow(m) - 1
    return v * mu(ctx).inverse() if normalized else v


def spectrum(ctx: FieldContext, normalized: bool = True, op: DiracMatrix | None = None):
    """Eigenvalue candidates q^m - 1 (times mu^-1 when normalized) with their
    eigenspace and generalized eigenspace dimensions."""
    op = op or assemble(ctx, normalized=normalized)
    r = ctx.r
    blocks = op.blocks()
    subs = [op.matrix.submatrix(b, b) for b in blocks]
    out = []
    for m in range(r):
        lam = candidate_eigenvalue(ctx, m, normalized)
        dim = gdim = index = 0
        for sub in subs:
            d, g, k = _nullities(sub, lam)
            dim += d
            gdim += g
            index = max(index, k)
        out.append(SpectrumEntry(m=m, eigenvalue=lam, dim=dim, generalized_dim=gdim,
                                 embedding=complex_embed(lam), index=index))
    return out


def spectrum_checks(ctx: FieldContext, entries, normalized: bool = True):
    """Dictionary of boolean checks on a computed spectrum."""
    r = ctx.r
    total = 2 * r ** 3
    gsum = sum(e.generalized_dim for e in entries)
    esum = sum(e.dim for e in entries)
    vals = [e.eigenvalue for e in entries]
    closed = {dirac_eigenvalue_closed(ctx, m) for m in range(r)}
    scale = 1 if normalized else mu(ctx)
    closed = {c * scale for c in closed}
    all_present = all(e.dim > 0 for e in entries)
    # equally spaced on a circle: centre -1/mu (or -1), radius |1/mu| (or 1)
    centre = complex_embed(-(mu(ctx).inverse() if normalized else ctx.one))
    pts = sorted((cmath.phase(e.embedding - centre) % (2 * math.pi), abs(e.embedding - centre))
                 for e in entries)
    radii = [p[1] for p in pts]
    gaps = [(pts[(k + 1) % r][0] - pts[k][0]) % (2 * math.pi) for k in range(r)]
    return {
        "eigenvalue_count": len(set(vals)) == r and all_present,
        "generalized_total": gsum == total,
        "rth_power_suffices": all(e.index <= r for e in entries),
        "non_diagonalizable": esum < total,
        "matches_closed_form": set(vals) == closed,
        "radius_spread": max(radii) - min(radii),
        "gap_spread": max(gaps) - min(gaps),
    }


# --- r = 3 modes ----------------------------------------------------------------------


def parse_mode(ctx: FieldContext, expr: str) -> AlgebraElement:
    """Evaluate a q-polynomial string in a, b, c, d (small fixed grammar)."""
    alg = algebra(ctx)
    names = {s: alg.generator(s) for s in "abcd"}
    names["q"] = ctx.q
    tree = compile(expr, "<mode>", "eval")
    for name in tree.co_names:
        if name not in names:
            raise ValueError(f"unexpected name {name!r} in mode expression")
    val = eval(tree, {"__builtins__": {}}, names)  # noqa: S307 - fixed internal table
    if not isinstance(val, AlgebraElement):
        val = alg.const(val)
    return val


@dataclass
class ModesReport:
    eigen_ok: dict
    independent: bool
    spans_eigenspaces: dict
    conjugation_closed: dict
    failures: list

    @property
    def ok(self) -> bool:
        return (not self.failures and self.independent and all(self.spans_eigenspaces.values())
                and all(self.conjugation_closed.values()))


def _mode_label_value(ctx, label):
    return {"0": ctx.zero, "-1": -ctx.one, "q^2": ctx.qpow(2)}[label]


def listed_modes(ctx: FieldContext):
    return {label: [Spinor(parse_mode(ctx, x), parse_mode(ctx, y)) for x, y in vecs]
            for label, vecs in MODES_R3.items()}


def _rank_of(ctx, vectors):
    if not vectors:
        return 0
    cols = [{i: v for i, v in enumerate(vec) if v} for vec in vectors]
    return ScalarMatrix.from_columns(ctx, len(vectors[0]), cols).rank()


def verify_modes_r3(op: DiracMatrix | None = None) -> ModesReport:
    ctx = root_of_unity(3)
    op = op or assemble(ctx, normalized=True, include_connection=True)
    modes = listed_modes(ctx)
    failures = []
    eigen_ok = {}
    allvecs = []
    spans = {}
    conj = {}
    for label, spinors in modes.items():
        lam = _mode_label_value(ctx, label)
        ok = []
        for k, s in enumerate(spinors):
            good = op.apply(s) == s.scale(lam)
            ok.append(good)
            if not good:
                failures.append((label, k))
        eigen_ok[label] = ok
        vecs = [s.to_vector() for s in spinors]
        allvecs.extend(vecs)
        nullity = op.matrix.nrows - op.matrix.shift(-lam).rank()
        spans[label] = _rank_of(ctx, vecs) == nullity
        images = [charge_conjugate(s).to_vector() for s in spinors]
        conj[label] = _rank_of(ctx, vecs + images) == _rank_of(ctx, vecs)
    independent = _rank_of(ctx, allvecs) == len(allvecs)
    return ModesReport(eigen_ok=eigen_ok, independent=independent, spans_eigenspaces=spans,
                       conjugation_closed=conj, failures=failures)


# --- charge conjugation ---------------------------------------------------------------


def conjugate_element(f: AlgebraElement) -> AlgebraElement:
    """Semilinear algebra map a <-> d, b <-> c, q -> q^-1 on coefficients."""
    alg = f.alg
    ctx = alg.ctx
    a, b, c = alg.generator("a"), alg.generator("b"), alg.generator("c")
    out = alg.zero()
    for idx, v in f.terms.items():
        k, n, m = alg.exponents(idx)
        term = (b ** k) * (c ** n) * (a ** m)
        out = out + term.scale(ctx.galois(v, -1))
    return out


def charge_conjugate(s: Spinor) -> Spinor:
    """Swap the spinor entries and apply the conjugation to each."""
    if s.alg.ctx.r is None:
        raise ValueError("charge conjugation needs a root-of-unity context")
    return Spinor(conjugate_element(s.psi2), conjugate_element(s.psi1))


# --- offset ----------------------------------------------------------------------------


def offset_report(r: int) -> dict:
    ctx = root_of_unity(r)
    val = offset_exact(ctx)
    emb = complex_embed(val)
    ref = math.sin(6 * math.pi / r) / math.sin(8 * math.pi / r)
    return {"r": r, "offset": val, "embedding": emb, "sine_ratio": ref,
            "agrees": abs(emb - ref) < 1e-10}
