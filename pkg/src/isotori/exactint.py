"""Exact integer/rational linear algebra kernel.

Everything here is exact: scalars are ``fractions.Fraction`` (arbitrary
precision, always in lowest terms, positive denominator) and the integer
normal-form algorithms run on Python ints.  No floating point is used
anywhere.

Conventions pinned for the whole package:

* Lattices are COLUMN spans: the columns of a basis matrix generate the
  lattice.
* Hermite normal form is column-style: ``H = M @ U`` with ``U`` unimodular,
  ``H`` lower triangular with positive diagonal and the entries left of the
  diagonal in each row reduced into ``[0, diagonal)``.
* Pivot selection everywhere: smallest nonzero absolute value, ties broken
  by lowest (row, col) lexicographically, so all witnesses are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence


class DegenerateLatticeError(ValueError):
    """Raised when a lattice basis does not have the required rank."""


Rat = Fraction


def rat(x) -> Fraction:
    """Coerce an int, Fraction or 'p/q' string to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def rat_str(x: Fraction) -> str:
    """Serialize a rational as 'p/q', or 'p' when the denominator is 1."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Matrix:
    """Immutable exact rational matrix (row-major)."""

    __slots__ = ("_rows", "rows", "cols")

    def __init__(self, rows: Iterable[Iterable]):
        grid = tuple(tuple(rat(x) for x in row) for row in rows)
        if not grid or not grid[0]:
            raise ValueError("matrix must have positive dimensions")
        if any(len(r) != len(grid[0]) for r in grid):
            raise ValueError("ragged rows")
        self._rows = grid
        self.rows = len(grid)
        self.cols = len(grid[0])

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "Matrix":
        return cls([[col[i] for col in columns] for i in range(len(columns[0]))])

    @classmethod
    def block(cls, grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        rows = []
        for band in grid:
            height = band[0].rows
            if any(m.rows != height for m in band):
                raise ValueError("inconsistent block heights")
            for i in range(height):
                row = []
                for m in band:
                    row.extend(m._rows[i])
                rows.append(row)
        return cls(rows)

    @classmethod
    def block_diagonal(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        total_r = sum(b.rows for b in blocks)
        total_c = sum(b.cols for b in blocks)
        grid = [[Fraction(0)] * total_c for _ in range(total_r)]
        r = c = 0
        for b in blocks:
            for i in range(b.rows):
                grid[r + i][c : c + b.cols] = list(b._rows[i])
            r += b.rows
            c += b.cols
        return cls(grid)

    # -- access -------------------------------------------------------

    def __getitem__(self, key) -> Fraction:
        i, j = key
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def to_int_grid(self) -> list[list[int]]:
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return [[int(x) for x in r] for r in self._rows]

    def submatrix(self, row_range, col_range) -> "Matrix":
        return Matrix([[self._rows[i][j] for j in col_range] for i in row_range])

    # -- predicates ---------------------------------------------------

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self._rows for x in r)

    def is_antisymmetric(self) -> bool:
        return self.is_square() and all(
            self._rows[i][j] == -self._rows[j][i]
            for i in range(self.rows)
            for j in range(i, self.cols)
        )

    # -- arithmetic ---------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        return Matrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self._rows, other._rows)
            ]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        return Matrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self._rows, other._rows)
            ]
        )

    def __neg__(self) -> "Matrix":
        return Matrix([[-x for x in r] for r in self._rows])

    def scale(self, c) -> "Matrix":
        c = rat(c)
        return Matrix([[c * x for x in r] for r in self._rows])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        cols = [other.column(j) for j in range(other.cols)]
        return Matrix(
            [
                [sum(a * b for a, b in zip(row, col)) for col in cols]
                for row in self._rows
            ]
        )

    def transpose(self) -> "Matrix":
        return Matrix([self.column(j) for j in range(self.cols)])

    def _check_shape(self, other: "Matrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    # -- exact elimination --------------------------------------------

    def det(self) -> Fraction:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        a = [list(r) for r in self._rows]
        n = self.rows
        det = Fraction(1)
        for k in range(n):
            pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != k:
                a[k], a[pivot] = a[pivot], a[k]
                det = -det
            det *= a[k][k]
            inv = 1 / a[k][k]
            for i in range(k + 1, n):
                if a[i][k] == 0:
                    continue
                f = a[i][k] * inv
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
        return det

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._rows)]
        for k in range(n):
            pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
            if pivot is None:
                raise ValueError("matrix is singular")
            a[k], a[pivot] = a[pivot], a[k]
            inv = 1 / a[k][k]
            a[k] = [x * inv for x in a[k]]
            for i in range(n):
                if i != k and a[i][k] != 0:
                    f = a[i][k]
                    a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        return Matrix([row[n:] for row in a])

    def rank(self) -> int:
        a = [list(r) for r in self._rows]
        m, n = self.rows, self.cols
        rank = 0
        col = 0
        for col in range(n):
            pivot = next((i for i in range(rank, m) if a[i][col] != 0), None)
            if pivot is None:
                continue
            a[rank], a[pivot] = a[pivot], a[rank]
            inv = 1 / a[rank][col]
            for i in range(rank + 1, m):
                if a[i][col] != 0:
                    f = a[i][col] * inv
                    for j in range(col, n):
                        a[i][j] -= f * a[rank][j]
            rank += 1
            if rank == m:
                break
        return rank

    def __repr__(self) -> str:
        body = "; ".join(" ".join(rat_str(x) for x in r) for r in self._rows)
        return f"Matrix[{body}]"


@dataclass(frozen=True)
class UnimodularMatrix:
    """Integer square matrix with determinant +-1 (checked on construction)."""

    matrix: Matrix

    def __post_init__(self):
        if not self.matrix.is_square():
            raise ValueError("unimodular matrix must be square")
        if not self.matrix.is_integral():
            raise ValueError("unimodular matrix must be integral")
        if self.matrix.det() not in (1, -1):
            raise ValueError("determinant must be +1 or -1")

    @classmethod
    def identity(cls, n: int) -> "UnimodularMatrix":
        return cls(Matrix.identity(n))

    @property
    def dimension(self) -> int:
        return self.matrix.rows

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.matrix.inverse())

    def transpose(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.matrix.transpose())

    def __matmul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(self.matrix @ other.matrix)


# ----------------------------------------------------------------------
# pivot selection shared by the normal-form algorithms
# ----------------------------------------------------------------------


def _select_pivot(grid, row_range, col_range):
    """Smallest nonzero |entry|, ties by lowest (row, col); None if all zero."""
    best = None
    for i in row_range:
        for j in col_range:
            v = grid[i][j]
            if v != 0 and (best is None or abs(v) < abs(grid[best[0]][best[1]])):
                best = (i, j)
    return best


# ----------------------------------------------------------------------
# Hermite normal form (column style, with unimodular witness)
# ----------------------------------------------------------------------


def hnf(m: Matrix) -> tuple[Matrix, UnimodularMatrix]:
    """Column-style Hermite normal form H = M @ U of an integer matrix.

    H is the canonical basis of the column lattice of M: lower triangular
    with positive pivots, entries left of each pivot reduced into
    [0, pivot).  Requires rank(M) = min(rows, cols); wide full-row-rank
    inputs yield H = [L | 0].
    """
    h = m.to_int_grid()
    nrows, ncols = m.rows, m.cols
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_cols(a, b):
        if a == b:
            return
        for row in h:
            row[a], row[b] = row[b], row[a]
        for row in u:
            row[a], row[b] = row[b], row[a]

    def addmul_col(dst, src, q):
        if q == 0:
            return
        for row in h:
            row[dst] -= q * row[src]
        for row in u:
            row[dst] -= q * row[src]

    def negate_col(a):
        for row in h:
            row[a] = -row[a]
        for row in u:
            row[a] = -row[a]

    pc = 0
    for pr in range(nrows):
        if pc >= ncols:
            break
        seg = range(pc, ncols)
        if all(h[pr][j] == 0 for j in seg):
            continue
        # euclidean sweeps until only one nonzero remains in the row segment
        while True:
            jmin = min(
                (j for j in seg if h[pr][j] != 0),
                key=lambda j: (abs(h[pr][j]), j),
            )
            swap_cols(pc, jmin)
            others = [j for j in range(pc + 1, ncols) if h[pr][j] != 0]
            if not others:
                break
            for j in others:
                addmul_col(j, pc, h[pr][j] // h[pr][pc])
        if h[pr][pc] < 0:
            negate_col(pc)
        # reduce the entries left of the pivot in this row into [0, pivot)
        for j in range(pc):
            addmul_col(j, pc, h[pr][j] // h[pr][pc])
        pc += 1

    if pc < min(nrows, ncols):
        raise DegenerateLatticeError(
            f"rank {pc} lattice basis, expected rank {min(nrows, ncols)}"
        )
    return Matrix(h), UnimodularMatrix(Matrix(u))


def lattice_basis(m: Matrix) -> Matrix:
    """Square canonical basis of the column lattice of an integer matrix."""
    h, _ = hnf(m)
    return h.submatrix(range(m.rows), range(m.rows))


def in_column_lattice(basis: Matrix, vector: Sequence[int]) -> bool:
    """Exact membership test: does the integer vector lie in the column span?"""
    sol = basis.inverse() @ Matrix([[v] for v in vector])
    return sol.is_integral()


# ----------------------------------------------------------------------
# Smith normal form (with unimodular witnesses)
# ----------------------------------------------------------------------


def snf(m: Matrix) -> tuple[Matrix, UnimodularMatrix, UnimodularMatrix]:
    """Smith normal form S = U @ M @ V with d1 | d2 | ..., all di >= 0."""
    s = m.to_int_grid()
    nrows, ncols = m.rows, m.cols
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(a, b):
        if a != b:
            s[a], s[b] = s[b], s[a]
            u[a], u[b] = u[b], u[a]

    def swap_cols(a, b):
        if a == b:
            return
        for row in s:
            row[a], row[b] = row[b], row[a]
        for row in v:
            row[a], row[b] = row[b], row[a]

    def addmul_row(dst, src, q):
        if q:
            s[dst] = [x - q * y for x, y in zip(s[dst], s[src])]
            u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, q):
        if q:
            for row in s:
                row[dst] -= q * row[src]
            for row in v:
                row[dst] -= q * row[src]

    for k in range(min(nrows, ncols)):
        while True:
            piv = _select_pivot(s, range(k, nrows), range(k, ncols))
            if piv is None:
                break
            swap_rows(k, piv[0])
            swap_cols(k, piv[1])
            dirty = False
            for i in range(k + 1, nrows):
                if s[i][k]:
                    addmul_row(i, k, s[i][k] // s[k][k])
                    dirty = dirty or s[i][k] != 0
            for j in range(k + 1, ncols):
                if s[k][j]:
                    addmul_col(j, k, s[k][j] // s[k][k])
                    dirty = dirty or s[k][j] != 0
            if dirty:
                continue
            # enforce d_k | trailing block
            culprit = next(
                (
                    (i, j)
                    for i in range(k + 1, nrows)
                    for j in range(k + 1, ncols)
                    if s[i][j] % s[k][k] != 0
                ),
                None,
            )
            if culprit is None:
                break
            addmul_row(k, culprit[0], -1)
        if s[k][k] < 0:
            s[k] = [-x for x in s[k]]
            u[k] = [-x for x in u[k]]
    return Matrix(s), UnimodularMatrix(Matrix(u)), UnimodularMatrix(Matrix(v))


# ----------------------------------------------------------------------
# Pfaffian
# ----------------------------------------------------------------------


def pfaffian(a: Matrix) -> Fraction:
    """Pfaffian of an even-dimensional antisymmetric rational matrix.

    Computed by exact skew-symmetric congruence elimination (O(n^3)); the
    congruent row+column operations leave the Pfaffian invariant except for
    swaps, which flip its sign.  Satisfies Pf(A)^2 = det(A) and
    Pf(U^T A U) = det(U) Pf(A).
    """
    if not a.is_square():
        raise ValueError("pfaffian needs a square matrix")
    n = a.rows
    if n % 2 != 0:
        raise ValueError("pfaffian needs even dimension")
    if not a.is_antisymmetric():
        raise ValueError("pfaffian needs an antisymmetric matrix")
    b = [list(r) for r in a.to_lists()]
    sign = 1
    result = Fraction(1)
    for k in range(0, n, 2):
        # ensure b[k][k+1] != 0 by a congruent swap of row/col pairs
        if b[k][k + 1] == 0:
            j = next((j for j in range(k + 2, n) if b[k][j] != 0), None)
            if j is None:
                return Fraction(0)
            for row in b:
                row[k + 1], row[j] = row[j], row[k + 1]
            b[k + 1], b[j] = b[j], b[k + 1]
            sign = -sign
        p = b[k][k + 1]
        result *= p
        for j in range(k + 2, n):
            # clear row k (pivot at (k, k+1)) then row k+1 (pivot at (k+1, k))
            for prow, pcol in ((k, k + 1), (k + 1, k)):
                c = b[prow][j] / b[prow][pcol]
                if c != 0:
                    for i in range(n):
                        b[i][j] -= c * b[i][pcol]
                    b[j] = [x - c * y for x, y in zip(b[j], b[pcol])]
    return sign * result


# ----------------------------------------------------------------------
# common-denominator scaling
# ----------------------------------------------------------------------


def lcd_scale(a: Matrix, b: Matrix) -> tuple[Matrix, Matrix, int]:
    """Scale two rational matrices by their joint least common denominator.

    The SAME scalar is applied to both matrices, so congruence-class
    comparisons between them are preserved.
    """
    c = 1
    for m in (a, b):
        for row in m.to_lists():
            for x in row:
                c = lcm(c, x.denominator)
    return a.scale(c), b.scale(c), c


def vector_lcd(values: Iterable[Fraction]) -> int:
    """Least common denominator of a collection of rationals."""
    c = 1
    for x in values:
        c = lcm(c, Fraction(x).denominator)
    return c


def rational_gcd(values: Iterable[Fraction]) -> Fraction:
    """Positive generator of the Z-module generated by the given rationals."""
    vals = [Fraction(v) for v in values]
    d = 1
    for v in vals:
        d = lcm(d, v.denominator)
    g = 0
    for v in vals:
        g = gcd(g, int(v * d))
    return Fraction(g, d)
