"""Coefficient fields: the r-th cyclotomic field or Q with a rational q.

Both modes are presented as Q[x]/(P) with x standing for q, so every
formula is written once. In root-of-unity mode P is the r-th cyclotomic
polynomial; in rational mode P = x - q and elements are plain rationals.
"""

from __future__ import annotations

import cmath
import functools
import math
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq, mpz

from cqsl2.kernel import FieldData, Scalar

__all__ = [
    "FieldContext",
    "Scalar",
    "root_of_unity",
    "rational_q",
    "q_int",
    "q2_int",
    "q_gauss",
    "mu",
    "invert",
    "complex_embed",
    "scalar_to_json",
    "scalar_from_json",
]


_EXACT_TYPES = (int, Rational, type(mpz(0)), type(mpq(0)))


# --- integer polynomial helpers (coefficient lists, low degree first) -------


def _poly_divmod(num, den):
    """Exact division of rational polynomials; returns (quotient, remainder)."""
    num = [mpq(x) for x in num]
    den = [mpq(x) for x in den]
    while den and not den[-1]:
        den.pop()
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    quo = [mpq(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        coef = num[-1] / lead
        quo[shift] = coef
        for i, d in enumerate(den):
            num[shift + i] -= coef * d
        num.pop()
        while num and not num[-1]:
            num.pop()
    return quo, num


def _poly_mul(a, b):
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [mpq(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    while out and not out[-1]:
        out.pop()
    return out


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(r: int) -> tuple:
    """Integer coefficients of Phi_r, lowest degree first."""
    num = [mpq(-1)] + [mpq(0)] * (r - 1) + [mpq(1)]
    for d in range(1, r):
        if r % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_poly(d)))
            assert not any(rem)
    return tuple(int(c) for c in num)


# --- contexts ----------------------------------------------------------------


class FieldContext:
    """Coefficient field for one deformation parameter.

    Use :func:`root_of_unity` or :func:`rational_q`; instances are cached so
    equal parameters give the identical object.
    """

    def __init__(self, r: int | None = None, q: Fraction | None = None):
        if (r is None) == (q is None):
            raise ValueError("exactly one of r or q must be given")
        self.r = r
        self.q_value = None if q is None else mpq(q.numerator, q.denominator)
        if r is not None:
            if r < 3 or r % 2 == 0:
                raise ValueError(f"r must be an odd integer >= 3, got {r}")
            phi = cyclotomic_poly(r)
            n = len(phi) - 1
            self.modulus = tuple(mpq(c) for c in phi)
            # x^j mod Phi_r for j = n .. r-1 (products are first folded mod x^r - 1)
            red = []
            for j in range(n, r):
                _, rem = _poly_divmod([0] * j + [1], self.modulus)
                red.append(list(rem) + [mpq(0)] * (n - len(rem)))
            self._fd = FieldData(self, n, r, red)
            self.degree = n
        else:
            qv = self.q_value
            if qv == 0 or qv * qv == 1:
                raise ValueError(f"rational q must satisfy q != 0 and q^2 != 1, got {qv}")
            self.modulus = (-qv, mpq(1))
            self._fd = FieldData(self, 1, 0, [])
            self.degree = 1
        self.zero = self._make((mpq(0),) * self.degree)
        self.one = self._make((mpq(1),) + (mpq(0),) * (self.degree - 1))
        if r is not None:
            self.q = self._make((mpq(0), mpq(1)) + (mpq(0),) * (self.degree - 2))
        else:
            self.q = self._make((self.q_value,))
        self._qpow_cache = {}

    @property
    def is_root_of_unity(self) -> bool:
        return self.r is not None

    @property
    def mode(self) -> str:
        return "cyclotomic" if self.r is not None else "rational"

    def _make(self, c) -> Scalar:
        return Scalar(self._fd, tuple(c))

    def __repr__(self):
        if self.r is not None:
            return f"FieldContext(r={self.r})"
        return f"FieldContext(q={self.q_value})"

    def __reduce__(self):
        if self.r is not None:
            return (root_of_unity, (self.r,))
        return (rational_q, (str(self.q_value),))

    def label(self) -> str:
        return f"r={self.r}" if self.r is not None else f"q={self.q_value}"

    # construction / coercion

    def coerce(self, x) -> Scalar:
        if isinstance(x, Scalar):
            if x.fd is not self._fd:
                raise ValueError("scalar belongs to a different field context")
            return x
        if isinstance(x, bool):
            raise TypeError("bool is not a field element")
        if isinstance(x, _EXACT_TYPES):
            return self._make((mpq(x),) + (mpq(0),) * (self.degree - 1))
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    __call__ = coerce

    def from_coeffs(self, coeffs) -> Scalar:
        """Element sum_i coeffs[i] q^i, reduced into canonical form."""
        acc = self.zero
        for i, c in enumerate(coeffs):
            if c:
                acc = acc + self.qpow(i) * self.coerce(mpq(c))
        return acc

    def qpow(self, e: int) -> Scalar:
        """q**e (cached; negative e allowed)."""
        if self.r is not None:
            e %= self.r
        s = self._qpow_cache.get(e)
        if s is None:
            s = self.q ** e
            self._qpow_cache[e] = s
        return s

    # field inverse

    def _invert_coeffs(self, c):
        if not any(c):
            raise ZeroDivisionError("inverse of zero field element")
        if self.degree == 1:
            return (1 / c[0],)
        # extended Euclid: find s with s*a = 1 mod P
        a = list(c)
        while a and not a[-1]:
            a.pop()
        r0, r1 = list(self.modulus), a
        s0, s1 = [mpq(0)], [mpq(1)]
        while len(r1) > 1:
            quo, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(quo, s1))
            if not r1:
                raise ZeroDivisionError("element not invertible (modulus not irreducible?)")
        inv_const = 1 / r1[0]
        out = [x * inv_const for x in s1]
        _, out = _poly_divmod(out, self.modulus)
        out = list(out) + [mpq(0)] * (self.degree - len(out))
        return tuple(out)

    # presentation

    def format(self, s: Scalar) -> str:
        if self.degree == 1:
            return str(s.c[0])
        parts = []
        for i, x in enumerate(s.c):
            if not x:
                continue
            mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            if i == 0:
                parts.append(str(x))
            elif x == 1:
                parts.append(mono)
            elif x == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{x}*{mono}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    def galois(self, s: Scalar, k: int) -> Scalar:
        """Apply the field automorphism q -> q^k (gcd(k, r) = 1)."""
        if self.r is None:
            raise ValueError("Galois action needs a root-of-unity context")
        if math.gcd(k, self.r) != 1:
            raise ValueError(f"q -> q^{k} is not an automorphism for r={self.r}")
        acc = self.zero
        for i, x in enumerate(s.c):
            if x:
                acc = acc + self.qpow(i * k) * self.coerce(x)
        return acc


@functools.lru_cache(maxsize=None)
def root_of_unity(r: int) -> FieldContext:
    """Cyclotomic context with q a primitive r-th root of unity."""
    return FieldContext(r=r)


@functools.lru_cache(maxsize=None)
def _rational_cached(num: int, den: int) -> FieldContext:
    return FieldContext(q=Fraction(num, den))


def rational_q(q) -> FieldContext:
    """Rational context with deformation parameter ``q`` (int, Fraction or 'p/q')."""
    fq = Fraction(str(q)) if not isinstance(q, Fraction) else q
    return _rational_cached(fq.numerator, fq.denominator)


# --- q-numbers -----------------------------------------------------------------


def q_int(ctx: FieldContext, n: int) -> Scalar:
    """Balanced q-integer (q^n - q^-n)/(q - q^-1)."""
    q = ctx.q
    return (ctx.qpow(n) - ctx.qpow(-n)) / (q - q.inverse())


def q2_int(ctx: FieldContext, n: int) -> Scalar:
    """[n]_{q^2} = (1 - q^{2n})/(1 - q^2)."""
    return (1 - ctx.qpow(2 * n)) / (1 - ctx.qpow(2))


def q_gauss(ctx: FieldContext, n: int) -> Scalar:
    """Unbalanced q-integer (1 - q^n)/(1 - q), e.g. 1 + q for n = 2."""
    return (1 - ctx.qpow(n)) / (1 - ctx.q)


def mu(ctx: FieldContext) -> Scalar:
    """mu = 1 - q^-2."""
    return 1 - ctx.qpow(-2)


def invert(x: Scalar) -> Scalar:
    """Field inverse; raises ZeroDivisionError on zero."""
    return x.inverse()


def complex_embed(x: Scalar, k: int = 1) -> complex:
    """Evaluate ``x`` at q = exp(2 pi i k / r) in double precision."""
    ctx = x.ctx
    if ctx.r is None:
        raise ValueError("complex embedding needs a root-of-unity context")
    if math.gcd(k, ctx.r) != 1:
        raise ValueError(f"embedding index {k} is not coprime to r={ctx.r}")
    z = cmath.exp(2j * math.pi * k / ctx.r)
    return sum(complex(float(c)) * z**i for i, c in enumerate(x.c) if c)


# --- JSON -----------------------------------------------------------------------


def scalar_to_json(x: Scalar) -> dict:
    ctx = x.ctx
    if ctx.r is not None:
        return {"mode": "cyclotomic", "r": ctx.r, "coeffs": [str(c) for c in x.c]}
    return {"mode": "rational", "q": str(ctx.q_value), "value": str(x.c[0])}


def scalar_from_json(obj: dict) -> Scalar:
    if obj["mode"] == "cyclotomic":
        ctx = root_of_unity(int(obj["r"]))
        coeffs = [mpq(c) for c in obj["coeffs"]]
        return ctx.from_coeffs(coeffs)
    if obj["mode"] == "rational":
        ctx = rational_q(obj["q"])
        return ctx.coerce(mpq(obj["value"]))
    raise ValueError(f"unknown scalar mode {obj['mode']!r}")
