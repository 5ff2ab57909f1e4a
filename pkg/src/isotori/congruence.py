"""GL(2n,Z)-congruence of nondegenerate antisymmetric forms.

Two antisymmetric matrices A, B are congruent when U^T A U = B for some
integer U with det +-1.  For integer forms the chain of symplectic
elementary divisors d1 | d2 | ... | dn in the normal form
``sum_i d_i * [[0,1],[-1,0]]`` is a complete invariant; rational forms are
decided by scaling both sides with one common denominator first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

from .exactint import (
    Matrix,
    UnimodularMatrix,
    lcd_scale,
    pfaffian,
)


@dataclass(frozen=True)
class AntisymmetricForm:
    """2n x 2n rational antisymmetric matrix with nonzero Pfaffian."""

    matrix: Matrix

    def __post_init__(self):
        m = self.matrix
        if not m.is_square() or m.rows % 2 != 0:
            raise ValueError("antisymmetric form must be 2n x 2n")
        if not m.is_antisymmetric():
            raise ValueError("matrix is not antisymmetric")
        if pfaffian(m) == 0:
            raise ValueError("degenerate form (zero Pfaffian)")

    @property
    def dimension(self) -> int:
        return self.matrix.rows

    def pfaffian(self) -> Fraction:
        return pfaffian(self.matrix)


@dataclass(frozen=True)
class DivisorChain:
    """Symplectic elementary divisors d1 | d2 | ... | dn, all positive."""

    divisors: tuple[int, ...]

    def __post_init__(self):
        d = self.divisors
        if not d or any(x <= 0 for x in d):
            raise ValueError("divisors must be positive")
        if any(d[i + 1] % d[i] != 0 for i in range(len(d) - 1)):
            raise ValueError("divisor chain must satisfy d_i | d_{i+1}")

    def __iter__(self):
        return iter(self.divisors)


@dataclass(frozen=True)
class CongruenceVerdict:
    equivalent: bool
    witness: Optional[UnimodularMatrix] = None


def standard_block(divisors) -> Matrix:
    """The normal form: block diagonal of d_i * [[0,1],[-1,0]]."""
    blocks = [Matrix([[0, d], [-d, 0]]) for d in divisors]
    return Matrix.block_diagonal(blocks)


def symplectic_divisors(form: AntisymmetricForm) -> tuple[DivisorChain, UnimodularMatrix]:
    """Divisor chain and witness U with U^T A U = sum d_i J_2 for integer A.

    Elimination scheme: pick the nonzero entry of minimal absolute value
    (ties lexicographic), move it to the (2k, 2k+1) slot by congruent swaps,
    clear the two working rows by congruent integer column+row operations,
    force d_k to divide the trailing block by the gcd-improvement step, then
    recurse on the trailing block.
    """
    if not form.matrix.is_integral():
        raise ValueError("symplectic_divisors needs an integer form")
    b = form.matrix.to_int_grid()
    n2 = form.dimension
    u = [[int(i == j) for j in range(n2)] for i in range(n2)]

    def swap(a, c):
        # congruent transposition of indices a and c
        if a == c:
            return
        b[a], b[c] = b[c], b[a]
        for row in b:
            row[a], row[c] = row[c], row[a]
        for row in u:
            row[a], row[c] = row[c], row[a]

    def addmul(dst, src, q):
        # congruent column op col_dst += q col_src (and matching row op)
        if q == 0:
            return
        for row in b:
            row[dst] += q * row[src]
        b[dst] = [x + q * y for x, y in zip(b[dst], b[src])]
        for row in u:
            row[dst] += q * row[src]

    divisors = []
    for k in range(0, n2, 2):
        while True:
            best = None
            for i in range(k, n2):
                for j in range(k, n2):
                    vij = b[i][j]
                    if vij != 0 and (
                        best is None or abs(vij) < abs(b[best[0]][best[1]])
                    ):
                        best = (i, j)
            if best is None:
                raise ValueError("degenerate form in divisor computation")
            # scanning row-major over [k:, k:] finds the (i, j) copy with
            # i < j first, and the swaps cannot collide: i >= k, j >= k+1
            i, j = best
            swap(k, i)
            swap(k + 1, j)
            if b[k][k + 1] < 0:
                swap(k, k + 1)
            d = b[k][k + 1]
            # clear row k with column ops against col k+1, row k+1 against col k
            dirty = False
            for j2 in range(k + 2, n2):
                if b[k][j2]:
                    addmul(j2, k + 1, -(b[k][j2] // d))
                    dirty = dirty or b[k][j2] != 0
            for j2 in range(k + 2, n2):
                if b[k + 1][j2]:
                    # pivot b[k+1][k] = -d
                    addmul(j2, k, b[k + 1][j2] // d)
                    dirty = dirty or b[k + 1][j2] != 0
            if dirty:
                continue
            culprit = next(
                (
                    (i2, j2)
                    for i2 in range(k + 2, n2)
                    for j2 in range(k + 2, n2)
                    if b[i2][j2] % d != 0
                ),
                None,
            )
            if culprit is None:
                divisors.append(d)
                break
            # gcd-improvement: fold the offending row/column into the pivot rows
            addmul(k, culprit[0], 1)
    chain = DivisorChain(tuple(divisors))
    witness = UnimodularMatrix(Matrix(u))
    assert witness.matrix.transpose() @ form.matrix @ witness.matrix == standard_block(chain)
    return chain, witness


def congruent(a: AntisymmetricForm, b: AntisymmetricForm) -> CongruenceVerdict:
    """Decide GL(2n,Z)-congruence of two rational antisymmetric forms.

    Both matrices are scaled by one common denominator (congruence commutes
    with scalar multiplication), the integer divisor chains are compared,
    and on success a witness with U^T A U = B exactly is composed from the
    two normal-form witnesses and re-verified.
    """
    if a.dimension != b.dimension:
        raise ValueError("dimension mismatch")
    am, bm, _ = lcd_scale(a.matrix, b.matrix)
    ai = AntisymmetricForm(am)
    bi = AntisymmetricForm(bm)
    if abs(pfaffian(am)) != abs(pfaffian(bm)):
        return CongruenceVerdict(False)
    chain_a, u_a = symplectic_divisors(ai)
    chain_b, u_b = symplectic_divisors(bi)
    if chain_a != chain_b:
        return CongruenceVerdict(False)
    witness = u_a @ u_b.inverse()
    w = witness.matrix
    if w.transpose() @ a.matrix @ w != b.matrix:
        raise AssertionError("witness failed exact verification")
    return CongruenceVerdict(True, witness)


# ----------------------------------------------------------------------
# brute-force oracle (tiny sizes)
# ----------------------------------------------------------------------

_ORACLE_BUDGET = 50_000_000


def bruteforce_congruent(
    a: AntisymmetricForm, b: AntisymmetricForm, bound: int
) -> CongruenceVerdict:
    """Exhaustive congruence oracle over integer U with entries in [-bound, bound].

    Enumerates U column by column (each column in lexicographic order over
    (-bound..bound)^d), filters det = +-1 via the congruence equations, and
    returns the first witness in that fixed order.  Only dimensions 2 and 4
    are supported and the total enumeration must fit the budget; larger
    inputs should use the normal-form decider instead.
    """
    if a.dimension != b.dimension:
        raise ValueError("dimension mismatch")
    d = a.dimension
    if d not in (2, 4):
        raise ValueError("oracle supports dimensions 2 and 4 only; use congruent()")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if (2 * bound + 1) ** (d * d) > _ORACLE_BUDGET:
        raise ValueError(
            "enumeration over budget for this bound; use the normal-form decider"
        )
    if not (a.matrix.is_integral() and b.matrix.is_integral()):
        raise ValueError("oracle expects integer forms")

    import numpy as np

    amat = a.matrix.to_int_grid()
    bmat = b.matrix.to_int_grid()
    if max(abs(x) for row in amat for x in row) > 10**6:
        raise ValueError("entries too large for the vectorized oracle")

    vecs = np.array(
        list(product(range(-bound, bound + 1), repeat=d)), dtype=np.int64
    )
    gram = vecs @ np.array(amat, dtype=np.int64) @ vecs.T

    # masks[i][j] holds which vector pairs can occupy columns (i, j)
    masks = {
        (i, j): gram == bmat[i][j]
        for i in range(d)
        for j in range(i + 1, d)
    }
    nvec = len(vecs)

    def exact_det(cols) -> int:
        m = Matrix.from_columns([[int(x) for x in vecs[c]] for c in cols])
        return int(m.det())

    def found(cols) -> CongruenceVerdict:
        u = Matrix.from_columns([[int(x) for x in vecs[c]] for c in cols])
        witness = UnimodularMatrix(u)
        assert u.transpose() @ a.matrix @ u == b.matrix
        return CongruenceVerdict(True, witness)

    if d == 2:
        for i1 in range(nvec):
            row = masks[(0, 1)][i1]
            for i2 in np.nonzero(row)[0]:
                if exact_det((i1, int(i2))) in (1, -1):
                    return found((i1, int(i2)))
        return CongruenceVerdict(False)

    m01, m02, m03 = masks[(0, 1)], masks[(0, 2)], masks[(0, 3)]
    m12, m13, m23 = masks[(1, 2)], masks[(1, 3)], masks[(2, 3)]
    for i1 in range(nvec):
        c2 = np.nonzero(m01[i1])[0]
        if c2.size == 0:
            continue
        row02 = m02[i1]
        row03 = m03[i1]
        for i2 in c2:
            c3 = np.nonzero(row02 & m12[i2])[0]
            if c3.size == 0:
                continue
            row13 = m13[i2]
            for i3 in c3:
                c4 = np.nonzero(row03 & row13 & m23[i3])[0]
                for i4 in c4:
                    cols = (i1, int(i2), int(i3), int(i4))
                    if exact_det(cols) in (1, -1):
                        return found(cols)
    return CongruenceVerdict(False)
