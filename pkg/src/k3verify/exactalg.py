"""Exact integer and rational linear algebra kernels.

Everything here works over arbitrary-precision rationals (``fractions.Fraction``);
no floating point enters any code path.  Matrices are immutable values and all
kernels return fresh matrices, so results can be shared freely across threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class ExactMatrix:
    """Immutable dense matrix with exact rational entries."""

    entries: tuple

    @staticmethod
    def from_rows(rows) -> "ExactMatrix":
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if data and any(len(r) != len(data[0]) for r in data):
            raise ValueError("ragged rows")
        return ExactMatrix(data)

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zeros(rows: int, cols: int) -> "ExactMatrix":
        return ExactMatrix.from_rows([[0] * cols for _ in range(rows)])

    @staticmethod
    def diagonal(values) -> "ExactMatrix":
        vals = list(values)
        n = len(vals)
        return ExactMatrix.from_rows(
            [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.entries for x in row)

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        return all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows)
            for j in range(i)
        )

    def to_int_rows(self):
        if not self.is_integral():
            raise ValueError("matrix is not integral")
        return [[int(x) for x in row] for row in self.entries]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix.from_rows(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        return ExactMatrix.from_rows(
            [
                [
                    sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols))
                    for j in range(other.cols)
                ]
                for i in range(self.rows)
            ]
        )

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return ExactMatrix.from_rows(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix.from_rows([[-x for x in row] for row in self.entries])

    def scale(self, c) -> "ExactMatrix":
        c = Fraction(c)
        return ExactMatrix.from_rows([[c * x for x in row] for row in self.entries])

    def apply(self, vector):
        """Matrix times column vector, returned as a tuple of Fractions."""
        if len(vector) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(
            sum(self.entries[i][j] * Fraction(vector[j]) for j in range(self.cols))
            for i in range(self.rows)
        )

    def inverse(self) -> "ExactMatrix":
        """Exact inverse via Gauss-Jordan; raises on singular input."""
        if not self.is_square():
            raise ValueError("matrix is not square")
        n = self.rows
        a = [list(row) for row in self.entries]
        inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
        for col in range(n):
            pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
            if pivot is None:
                raise ZeroDivisionError("matrix is singular")
            a[col], a[pivot] = a[pivot], a[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
            p = a[col][col]
            a[col] = [x / p for x in a[col]]
            inv[col] = [x / p for x in inv[col]]
            for i in range(n):
                if i != col and a[i][col] != 0:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
                    inv[i] = [x - f * y for x, y in zip(inv[i], inv[col])]
        return ExactMatrix.from_rows(inv)


def smith_normal_form(m: ExactMatrix):
    """Smith normal form ``u @ m @ v = d`` of an integral matrix.

    Returns ``(d, u, v)`` with ``d`` diagonal, nonnegative, satisfying the
    divisibility chain d1 | d2 | ..., and ``u``, ``v`` unimodular.  The pivot
    with smallest nonzero absolute value is chosen at every stage to limit
    entry growth.
    """
    a = m.to_int_rows()
    nr, nc = m.rows, m.cols
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, mult):
        a[dst] = [x + mult * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + mult * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, mult):
        for row in a:
            row[dst] += mult * row[src]
        for row in v:
            row[dst] += mult * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(nr, nc):
        # smallest-nonzero-absolute-value pivot in the trailing block
        pivot = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        if a[t][t] < 0:
            negate_row(t)
        while True:
            changed = False
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t] != 0:
                        swap_rows(i, t)
                        changed = True
            for j in range(t + 1, nc):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(j, t)
                        changed = True
            if changed:
                if a[t][t] < 0:
                    negate_row(t)
                continue
            # divisibility: the pivot must divide every remaining entry
            offender = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        t += 1

    d = ExactMatrix.from_rows(a)
    return d, ExactMatrix.from_rows(u), ExactMatrix.from_rows(v)


def integer_kernel(m: ExactMatrix):
    """Basis of the saturated integer kernel of an integral matrix.

    The returned vectors come from the unimodular column transform of the
    Smith normal form, so they automatically span a primitive sublattice.
    """
    d, _u, v = smith_normal_form(m)
    rank = sum(1 for i in range(min(m.rows, m.cols)) if d[i, i] != 0)
    basis = []
    for j in range(rank, m.cols):
        basis.append(tuple(int(v[i, j]) for i in range(m.cols)))
    return basis


def inertia(m: ExactMatrix):
    """Signature counts ``(n_pos, n_neg, n_zero)`` of a symmetric matrix.

    Exact rational symmetric Gaussian reduction; when every diagonal entry of
    the active block vanishes, a symmetric shear manufactures a nonzero pivot
    (the hyperbolic-plane case, e.g. Gram(U)).
    """
    if not m.is_symmetric():
        raise ValueError("matrix is not symmetric")
    n = m.rows
    a = [list(row) for row in m.entries]
    pos = neg = zero = 0

    def sym_swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]

    def sym_shear(i, j):
        # row_i += row_j followed by col_i += col_j
        a[i] = [x + y for x, y in zip(a[i], a[j])]
        for row in a:
            row[i] += row[j]

    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            off = None
            for i in range(k, n):
                for j in range(i + 1, n):
                    if a[i][j] != 0:
                        off = (i, j)
                        break
                if off is not None:
                    break
            if off is None:
                zero += n - k
                break
            sym_shear(off[0], off[1])
            piv = off[0]
        sym_swap(k, piv)
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            if a[i][k] != 0:
                f = a[i][k] / p
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        for j in range(k + 1, n):
            a[k][j] = Fraction(0)
            # keep symmetry of the trailing block explicit
        for i in range(k + 1, n):
            a[i][k] = Fraction(0)
        k += 1
    return pos, neg, zero


def det_fraction_free(m: ExactMatrix) -> int:
    """Exact determinant of an integral matrix by Bareiss elimination."""
    if not m.is_square():
        raise ValueError("matrix is not square")
    a = m.to_int_rows()
    n = m.rows
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
