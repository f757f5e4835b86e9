"""The reduced coordinate algebra C_q[SL_2] at an odd root of unity.

Basis monomials c^k b^n d^m (0 <= k, n, m < r) are encoded as the integer
``(k*r + n)*r + m``. The generator ``a`` is eliminated through
a = (1 + q^-1 bc) d^-1 with d^-1 = d^(r-1).

In rational-q mode there is no finite-dimensional function algebra; the
algebra object then degenerates to the constants (r_eff = 1), which is all
the invariant-form layer needs.
"""

from __future__ import annotations

from cqsl2.scalar import FieldContext, Scalar, scalar_from_json, scalar_to_json

__all__ = ["QAlgebra", "AlgebraElement", "algebra", "generator", "multiply", "counit"]


class QAlgebra:
    """Monomial bookkeeping and structure constants for one field context."""

    _cache: dict = {}

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        self.r = ctx.r if ctx.r is not None else 1
        self.dim = self.r ** 3
        self._push_cache: dict = {}
        self._push2_cache: dict = {}
        self._partials_cache: dict = {}

    def index(self, k: int, n: int, m: int) -> int:
        r = self.r
        return (k * r + n) * r + m % r

    def exponents(self, idx: int):
        r = self.r
        m = idx % r
        kn = idx // r
        return kn // r, kn % r, m

    def monomial(self, k: int, n: int, m: int, coeff=1) -> "AlgebraElement":
        """c^k b^n d^m; zero when a b or c exponent is outside [0, r)."""
        if not (0 <= k < self.r and 0 <= n < self.r):
            return self.zero()
        coeff = self.ctx.coerce(coeff)
        if not coeff:
            return self.zero()
        return AlgebraElement(self, {self.index(k, n, m): coeff})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {0: self.ctx.one})

    def const(self, s) -> "AlgebraElement":
        s = self.ctx.coerce(s)
        return AlgebraElement(self, {0: s} if s else {})

    def generator(self, name: str) -> "AlgebraElement":
        if self.ctx.r is None:
            raise ValueError("generators need a root-of-unity context")
        if name == "b":
            return self.monomial(0, 1, 0)
        if name == "c":
            return self.monomial(1, 0, 0)
        if name == "d":
            return self.monomial(0, 0, 1)
        if name == "a":
            r = self.r
            return self.monomial(0, 0, r - 1) + self.monomial(1, 1, r - 1, self.ctx.qpow(-1))
        raise ValueError(f"unknown generator {name!r}; expected one of a, b, c, d")

    def mono_product(self, i1: int, i2: int):
        """(index, q-exponent) of the product of two basis monomials, or None."""
        k1, n1, m1 = self.exponents(i1)
        k2, n2, m2 = self.exponents(i2)
        k, n = k1 + k2, n1 + n2
        if k >= self.r or n >= self.r:
            return None
        # d^m1 c^k2 b^n2 = q^(m1 (k2 + n2)) c^k2 b^n2 d^m1
        return self.index(k, n, m1 + m2), m1 * (k2 + n2)


class AlgebraElement:
    """Finite linear combination of basis monomials with Scalar coefficients."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: QAlgebra, terms: dict):
        self.alg = alg
        self.terms = terms

    @property
    def ctx(self) -> FieldContext:
        return self.alg.ctx

    def _lift(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            if other.alg is not self.alg:
                raise ValueError("algebra elements from different contexts")
            return other
        return self.alg.const(other)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for i, v in o.terms.items():
            s = out.get(i)
            s = v if s is None else s + v
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return AlgebraElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.alg, {i: -v for i, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, s) -> "AlgebraElement":
        s = self.ctx.coerce(s)
        if not s:
            return self.alg.zero()
        return AlgebraElement(self.alg, {i: s * v for i, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined in general")
        result = self.alg.one()
        for _ in range(e):
            result = result * self
        return result

    def coefficient(self, k: int, n: int, m: int) -> Scalar:
        return self.terms.get(self.alg.index(k, n, m), self.ctx.zero)

    def constant_term(self) -> Scalar:
        return self.terms.get(0, self.ctx.zero)

    def is_constant(self) -> bool:
        return all(i == 0 for i in self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for i in sorted(self.terms):
            k, n, m = self.alg.exponents(i)
            mono = "".join(
                s if e == 1 else f"{s}^{e}" for s, e in (("c", k), ("b", n), ("d", m)) if e
            ) or "1"
            parts.append(f"({self.terms[i]})*{mono}")
        return " + ".join(parts)

    def to_json(self):
        out = []
        for i in sorted(self.terms):
            k, n, m = self.alg.exponents(i)
            out.append({"k": k, "n": n, "m": m, "coeff": scalar_to_json(self.terms[i])})
        return out


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Normal-ordered product on the c^k b^n d^m basis."""
    if x.alg is not y.alg:
        raise ValueError("algebra elements from different contexts")
    alg = x.alg
    ctx = alg.ctx
    out: dict = {}
    for i1, v1 in x.terms.items():
        for i2, v2 in y.terms.items():
            prod = alg.mono_product(i1, i2)
            if prod is None:
                continue
            idx, qe = prod
            v = v1 * v2
            if qe:
                v = v * ctx.qpow(qe)
            s = out.get(idx)
            out[idx] = v if s is None else s + v
    return AlgebraElement(alg, {i: v for i, v in out.items() if v})


def counit(x: AlgebraElement) -> Scalar:
    """epsilon(c^k b^n d^m) = 1 if k = n = 0 else 0."""
    alg = x.alg
    acc = alg.ctx.zero
    for i, v in x.terms.items():
        k, n, _ = alg.exponents(i)
        if k == 0 and n == 0:
            acc = acc + v
    return acc


def algebra(ctx: FieldContext) -> QAlgebra:
    """The (cached) algebra attached to ``ctx``."""
    alg = QAlgebra._cache.get(ctx)
    if alg is None:
        alg = QAlgebra(ctx)
        QAlgebra._cache[ctx] = alg
    return alg


def generator(ctx: FieldContext, name: str) -> AlgebraElement:
    return algebra(ctx).generator(name)


def algebra_element_from_json(ctx: FieldContext, obj) -> AlgebraElement:
    alg = algebra(ctx)
    acc = alg.zero()
    for term in obj:
        acc = acc + alg.monomial(term["k"], term["n"], term["m"], scalar_from_json(term["coeff"]))
    return acc
