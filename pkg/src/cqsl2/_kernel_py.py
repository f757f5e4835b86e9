"""Pure-Python arithmetic kernel.

Field elements live in Q[x]/(P) where P is either the cyclotomic polynomial
Phi_r (root-of-unity mode) or x - q (rational mode). An element is a tuple of
``gmpy2.mpq`` coefficients of length ``deg P``. The compiled ``_kernel``
extension exposes exactly the same names; :mod:`cqsl2.kernel` picks one.
"""

from gmpy2 import mpq

__all__ = ["FieldData", "Scalar", "row_sub_scaled", "IMPLEMENTATION"]

IMPLEMENTATION = "python"

_ZERO = mpq(0)


class FieldData:
    """Reduction data for one coefficient field.

    ``n`` is the extension degree, ``wrap`` is r when products may be folded
    modulo x^r - 1 first (cyclotomic case) and 0 otherwise, ``red[t]`` holds
    x^(n+t) reduced modulo P.
    """

    __slots__ = ("ctx", "n", "wrap", "length", "red")

    def __init__(self, ctx, n, wrap, red):
        self.ctx = ctx
        self.n = n
        self.wrap = wrap
        self.length = wrap if wrap else 2 * n - 1
        self.red = tuple(tuple(mpq(v) for v in row) for row in red)


def _mul(fd, a, b):
    n = fd.n
    if n == 1:
        return (a[0] * b[0],)
    length = fd.length
    wrap = fd.wrap
    buf = [_ZERO] * length
    for i in range(n):
        ai = a[i]
        if not ai:
            continue
        for j in range(n):
            bj = b[j]
            if bj:
                k = i + j
                if wrap and k >= wrap:
                    k -= wrap
                buf[k] += ai * bj
    red = fd.red
    for t in range(n, length):
        v = buf[t]
        if v:
            row = red[t - n]
            for i in range(n):
                ri = row[i]
                if ri:
                    buf[i] += v * ri
    return tuple(buf[:n])


class Scalar:
    """An exact element of the coefficient field."""

    __slots__ = ("fd", "c")

    def __init__(self, fd, c):
        self.fd = fd
        self.c = c

    @property
    def ctx(self):
        return self.fd.ctx

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.fd is not self.fd:
                raise ValueError("scalars from different field contexts")
            return other
        try:
            return self.fd.ctx.coerce(other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.fd, tuple(x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.fd, tuple(x - y for x, y in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.fd, tuple(y - x for x, y in zip(self.c, o.c)))

    def __neg__(self):
        return Scalar(self.fd, tuple(-x for x in self.c))

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.fd, _mul(self.fd, self.c, o.c))

    __rmul__ = __mul__

    def inverse(self):
        return Scalar(self.fd, self.fd.ctx._invert_coeffs(self.c))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        base = self
        if e < 0:
            base = self.inverse()
            e = -e
        result = self.fd.ctx.one
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        for x in self.c:
            if x:
                return True
        return False

    def is_zero(self):
        return not self.__bool__()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __ne__(self, other):
        eq = self.__eq__(other)
        if eq is NotImplemented:
            return eq
        return not eq

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return self.fd.ctx.format(self)

    __str__ = __repr__

    def __reduce__(self):
        return (_rebuild, (self.fd.ctx, self.c))


def _rebuild(ctx, c):
    return Scalar(ctx._fd, c)


def row_sub_scaled(target, pivot, factor):
    """In place: ``target -= factor * pivot`` for sparse rows ``{col: Scalar}``.

    Returns ``(added, removed)`` column lists so callers can maintain
    column occupancy.
    """
    added = []
    removed = []
    for col, pv in pivot.items():
        prod = factor * pv
        cur = target.get(col)
        if cur is None:
            target[col] = -prod
            added.append(col)
        else:
            new = cur - prod
            if new:
                target[col] = new
            else:
                del target[col]
                removed.append(col)
    return added, removed
