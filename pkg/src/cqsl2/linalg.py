"""Exact sparse linear algebra over a :class:`~cqsl2.scalar.FieldContext`.

Matrices are stored as a list of sparse rows ``{col: Scalar}``. Elimination
is forward Gaussian elimination with a Markowitz-style pivot rule (shortest
remaining row, then least-occupied column within it) followed by back
substitution, so block-diagonal or graded systems never fill in across
blocks.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from cqsl2.kernel import Scalar, row_sub_scaled
from cqsl2.scalar import FieldContext

__all__ = ["ScalarMatrix", "Echelon", "InconsistentSystem", "nullspace", "rank", "solve"]


class InconsistentSystem(ValueError):
    """Raised by :meth:`ScalarMatrix.solve` when no solution exists."""


class ScalarMatrix:
    """Sparse matrix of exact field elements; absent entries are zero."""

    def __init__(self, ctx: FieldContext, nrows: int, ncols: int, rows=None):
        self.ctx = ctx
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [dict() for _ in range(nrows)]
        if len(rows) != nrows:
            raise ValueError("row count does not match nrows")
        self.rows = rows

    @classmethod
    def from_dense(cls, ctx, entries) -> "ScalarMatrix":
        entries = [list(row) for row in entries]
        nrows = len(entries)
        ncols = len(entries[0]) if entries else 0
        rows = []
        for row in entries:
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            rows.append({j: ctx.coerce(v) for j, v in enumerate(row) if v})
        return cls(ctx, nrows, ncols, rows)

    @classmethod
    def from_columns(cls, ctx, nrows: int, columns) -> "ScalarMatrix":
        """Build from sparse columns ``[{row: Scalar}, ...]``."""
        rows = [dict() for _ in range(nrows)]
        ncols = 0
        for j, col in enumerate(columns):
            ncols = j + 1
            for i, v in col.items():
                if v:
                    rows[i][j] = v
        return cls(ctx, nrows, ncols, rows)

    @classmethod
    def identity(cls, ctx, n: int) -> "ScalarMatrix":
        return cls(ctx, n, n, [{i: ctx.one} for i in range(n)])

    @classmethod
    def zeros(cls, ctx, nrows: int, ncols: int) -> "ScalarMatrix":
        return cls(ctx, nrows, ncols)

    def copy(self) -> "ScalarMatrix":
        return ScalarMatrix(self.ctx, self.nrows, self.ncols, [dict(r) for r in self.rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i].get(j, self.ctx.zero)

    def __setitem__(self, ij, value):
        i, j = ij
        value = self.ctx.coerce(value)
        if value:
            self.rows[i][j] = value
        else:
            self.rows[i].pop(j, None)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def to_dense(self):
        z = self.ctx.zero
        return [[row.get(j, z) for j in range(self.ncols)] for row in self.rows]

    def __eq__(self, other):
        if not isinstance(other, ScalarMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.rows == other.rows

    def __repr__(self):
        return f"ScalarMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()}, {self.ctx.label()})"

    # arithmetic

    def apply(self, vec):
        """Matrix times a dense vector (list of Scalars)."""
        if len(vec) != self.ncols:
            raise ValueError("dimension mismatch")
        out = []
        zero = self.ctx.zero
        for row in self.rows:
            acc = zero
            for j, v in row.items():
                x = vec[j]
                if x:
                    acc = acc + v * x
            out.append(acc)
        return out

    def __add__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("dimension mismatch")
        out = self.copy()
        for i, row in enumerate(other.rows):
            tgt = out.rows[i]
            for j, v in row.items():
                s = tgt.get(j)
                s = v if s is None else s + v
                if s:
                    tgt[j] = s
                else:
                    tgt.pop(j, None)
        return out

    def __neg__(self):
        return ScalarMatrix(self.ctx, self.nrows, self.ncols,
                            [{j: -v for j, v in r.items()} for r in self.rows])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "ScalarMatrix":
        s = self.ctx.coerce(s)
        if not s:
            return ScalarMatrix.zeros(self.ctx, self.nrows, self.ncols)
        return ScalarMatrix(self.ctx, self.nrows, self.ncols,
                            [{j: s * v for j, v in r.items()} for r in self.rows])

    def shift(self, s) -> "ScalarMatrix":
        """self + s * identity (square matrices)."""
        if self.nrows != self.ncols:
            raise ValueError("shift needs a square matrix")
        return self + ScalarMatrix.identity(self.ctx, self.nrows).scale(s)

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        rows = []
        for row in self.rows:
            acc = {}
            for k, v in row.items():
                for j, w in other.rows[k].items():
                    s = acc.get(j)
                    p = v * w
                    acc[j] = p if s is None else s + p
            rows.append({j: s for j, s in acc.items() if s})
        return ScalarMatrix(self.ctx, self.nrows, other.ncols, rows)

    def power(self, e: int) -> "ScalarMatrix":
        if self.nrows != self.ncols or e < 0:
            raise ValueError("power needs a square matrix and e >= 0")
        result = ScalarMatrix.identity(self.ctx, self.nrows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def transpose(self) -> "ScalarMatrix":
        rows = [dict() for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                rows[j][i] = v
        return ScalarMatrix(self.ctx, self.ncols, self.nrows, rows)

    def submatrix(self, row_idx, col_idx) -> "ScalarMatrix":
        cmap = {c: k for k, c in enumerate(col_idx)}
        rows = []
        for i in row_idx:
            rows.append({cmap[j]: v for j, v in self.rows[i].items() if j in cmap})
        return ScalarMatrix(self.ctx, len(row_idx), len(col_idx), rows)

    def diagonal_blocks(self):
        """Index sets of the connected components of a square matrix.

        Two indices are connected when an entry links them in either
        direction; the matrix is block diagonal on these sets after a
        simultaneous permutation of rows and columns.
        """
        if self.nrows != self.ncols:
            raise ValueError("diagonal_blocks needs a square matrix")
        parent = list(range(self.nrows))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, row in enumerate(self.rows):
            for j in row:
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups = {}
        for i in range(self.nrows):
            groups.setdefault(find(i), []).append(i)
        return [groups[k] for k in sorted(groups)]

    # elimination

    def echelon(self, rhs=None) -> "Echelon":
        return _eliminate(self, rhs)

    def rank(self) -> int:
        return self.echelon().rank

    def nullspace(self):
        return self.echelon().nullspace()

    def solve(self, rhs):
        """One solution of self @ x = rhs (dense list); raises InconsistentSystem."""
        return self.echelon(rhs).particular_solution()

    def det(self):
        """Exact determinant by dense Gaussian elimination (small matrices)."""
        if self.nrows != self.ncols:
            raise ValueError("det needs a square matrix")
        a = self.to_dense()
        n = self.nrows
        result = self.ctx.one
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col]), None)
            if piv is None:
                return self.ctx.zero
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                result = -result
            p = a[col][col]
            result = result * p
            inv = p.inverse()
            for i in range(col + 1, n):
                f = a[i][col]
                if f:
                    f = f * inv
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return result

    def inverse(self) -> "ScalarMatrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse needs a square matrix")
        n = self.nrows
        if self.rank() != n:
            raise ZeroDivisionError("matrix is singular")
        cols = []
        for k in range(n):
            e = [self.ctx.zero] * n
            e[k] = self.ctx.one
            cols.append({i: v for i, v in enumerate(self.solve(e)) if v})
        return ScalarMatrix.from_columns(self.ctx, n, cols)


@dataclass
class Echelon:
    """Result of forward elimination.

    ``pivots`` lists ``(col, row)`` in elimination order; every stored row is
    normalised so its pivot entry is 1 and contains no earlier pivot column.
    """

    ctx: FieldContext
    ncols: int
    pivots: list = field(default_factory=list)
    inconsistent: bool = False
    rhs_col: int | None = None

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def pivot_columns(self):
        return sorted(c for c, _ in self.pivots)

    @property
    def free_columns(self):
        piv = {c for c, _ in self.pivots}
        return [c for c in range(self.ncols) if c not in piv]

    def _reduced_rows(self):
        """Back substitution: rows containing only their pivot and free columns."""
        reduced = {}
        for col, row in reversed(self.pivots):
            row = dict(row)
            for c in [c for c in row if c != col and c in reduced]:
                f = row.get(c)
                if f is None:
                    continue
                del row[c]
                for cc, v in reduced[c].items():
                    if cc == c:
                        continue
                    p = f * v
                    s = row.get(cc)
                    s = -p if s is None else s - p
                    if s:
                        row[cc] = s
                    else:
                        row.pop(cc, None)
            reduced[col] = row
        return reduced

    def nullspace(self):
        """Exact kernel basis as dense vectors, one per free column."""
        reduced = self._reduced_rows()
        zero, one = self.ctx.zero, self.ctx.one
        basis = []
        for f in self.free_columns:
            vec = [zero] * self.ncols
            vec[f] = one
            for col, row in reduced.items():
                v = row.get(f)
                if v:
                    vec[col] = -v
            basis.append(vec)
        return basis

    def particular_solution(self):
        if self.inconsistent:
            raise InconsistentSystem("linear system has no solution")
        reduced = self._reduced_rows()
        zero = self.ctx.zero
        vec = [zero] * self.ncols
        for col, row in reduced.items():
            v = row.get(self.rhs_col)
            if v:
                vec[col] = v
        return vec


def _eliminate(mat: ScalarMatrix, rhs=None) -> Echelon:
    ctx = mat.ctx
    ncols = mat.ncols
    rows = [dict(r) for r in mat.rows]
    rhs_col = None
    if rhs is not None:
        if len(rhs) != mat.nrows:
            raise ValueError("rhs length mismatch")
        rhs_col = ncols
        for i, v in enumerate(rhs):
            v = ctx.coerce(v)
            if v:
                rows[i][rhs_col] = v

    active = set()
    col_rows: dict = {}
    heap = []
    for i, r in enumerate(rows):
        if not r:
            continue
        active.add(i)
        for c in r:
            col_rows.setdefault(c, set()).add(i)
        heapq.heappush(heap, (_row_weight(r, rhs_col), i))

    ech = Echelon(ctx=ctx, ncols=ncols, rhs_col=rhs_col)
    while heap:
        w, i = heapq.heappop(heap)
        if i not in active:
            continue
        row = rows[i]
        if w != _row_weight(row, rhs_col):
            heapq.heappush(heap, (_row_weight(row, rhs_col), i))
            continue
        cands = [c for c in row if c != rhs_col]
        active.discard(i)
        for c in row:
            col_rows[c].discard(i)
        if not cands:
            if row:
                ech.inconsistent = True
            continue
        pcol = min(cands, key=lambda c: (len(col_rows[c]), c))
        inv = row[pcol].inverse()
        if inv != ctx.one:
            for c in row:
                row[c] = row[c] * inv
        others = sorted(col_rows[pcol])
        for k in others:
            tgt = rows[k]
            factor = tgt[pcol]
            added, removed = row_sub_scaled(tgt, row, factor)
            for c in added:
                col_rows.setdefault(c, set()).add(k)
            for c in removed:
                col_rows[c].discard(k)
            if not tgt:
                active.discard(k)
            else:
                heapq.heappush(heap, (_row_weight(tgt, rhs_col), k))
        ech.pivots.append((pcol, row))
    return ech


def _row_weight(row, rhs_col):
    return len(row) - (1 if rhs_col is not None and rhs_col in row else 0)


def rank(mat: ScalarMatrix) -> int:
    return mat.rank()


def nullspace(mat: ScalarMatrix):
    return mat.nullspace()


def solve(mat: ScalarMatrix, rhs):
    return mat.solve(rhs)
