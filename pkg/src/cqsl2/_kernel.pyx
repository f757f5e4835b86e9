# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled arithmetic kernel; same surface as ``_kernel_py``."""

from gmpy2 import mpq

IMPLEMENTATION = "cython"

cdef object _ZERO = mpq(0)


cdef class FieldData:
    cdef readonly object ctx
    cdef readonly Py_ssize_t n
    cdef readonly Py_ssize_t wrap
    cdef readonly Py_ssize_t length
    cdef readonly tuple red

    def __init__(self, ctx, n, wrap, red):
        self.ctx = ctx
        self.n = n
        self.wrap = wrap
        self.length = wrap if wrap else 2 * n - 1
        self.red = tuple(tuple(mpq(v) for v in row) for row in red)


cdef tuple _mul(FieldData fd, tuple a, tuple b):
    cdef Py_ssize_t n = fd.n
    cdef Py_ssize_t length, wrap, i, j, k, t
    cdef list buf
    cdef tuple row
    cdef object ai, bj, v, ri
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
                buf[k] = buf[k] + ai * bj
    for t in range(n, length):
        v = buf[t]
        if v:
            row = <tuple>fd.red[t - n]
            for i in range(n):
                ri = row[i]
                if ri:
                    buf[i] = buf[i] + v * ri
    return tuple(buf[:n])


cdef tuple _add(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    return tuple([a[i] + b[i] for i in range(n)])


cdef tuple _sub(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    return tuple([a[i] - b[i] for i in range(n)])


cdef inline bint _nonzero(tuple c):
    cdef object x
    for x in c:
        if x:
            return True
    return False


cdef class Scalar:
    """An exact element of the coefficient field."""

    cdef readonly FieldData fd
    cdef readonly tuple c

    def __init__(self, FieldData fd, tuple c):
        self.fd = fd
        self.c = c

    @property
    def ctx(self):
        return self.fd.ctx

    cdef Scalar _coerce(self, other):
        if isinstance(other, Scalar):
            if (<Scalar>other).fd is not self.fd:
                raise ValueError("scalars from different field contexts")
            return <Scalar>other
        try:
            return self.fd.ctx.coerce(other)
        except TypeError:
            return None

    def __add__(self, other):
        cdef Scalar o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.fd, _add(self.c, o.c))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        cdef Scalar o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.fd, _sub(self.c, o.c))

    def __rsub__(self, other):
        cdef Scalar o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.fd, _sub(o.c, self.c))

    def __neg__(self):
        return Scalar(self.fd, tuple([-x for x in self.c]))

    def __pos__(self):
        return self

    def __mul__(self, other):
        cdef Scalar o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.fd, _mul(self.fd, self.c, o.c))

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self):
        return Scalar(self.fd, self.fd.ctx._invert_coeffs(self.c))

    def __truediv__(self, other):
        cdef Scalar o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        cdef Scalar o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e, mod):
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
        return _nonzero(self.c)

    def is_zero(self):
        return not _nonzero(self.c)

    def __eq__(self, other):
        cdef Scalar o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __ne__(self, other):
        cdef Scalar o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.c != o.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return self.fd.ctx.format(self)

    def __str__(self):
        return self.fd.ctx.format(self)

    def __reduce__(self):
        return (_rebuild, (self.fd.ctx, self.c))


def _rebuild(ctx, c):
    return Scalar(ctx._fd, c)


def row_sub_scaled(dict target, dict pivot, Scalar factor):
    """In place: ``target -= factor * pivot``; returns (added, removed) columns."""
    cdef list added = []
    cdef list removed = []
    cdef FieldData fd = factor.fd
    cdef tuple fc = factor.c
    cdef tuple prod, new
    cdef object col, pv, cur
    for col, pv in pivot.items():
        prod = _mul(fd, fc, (<Scalar>pv).c)
        cur = target.get(col)
        if cur is None:
            target[col] = Scalar(fd, tuple([-x for x in prod]))
            added.append(col)
        else:
            new = _sub((<Scalar>cur).c, prod)
            if _nonzero(new):
                target[col] = Scalar(fd, new)
            else:
                del target[col]
                removed.append(col)
    return added, removed
