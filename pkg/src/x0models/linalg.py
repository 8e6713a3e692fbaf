"""Exact kernels and ranks of integer matrices.

The workhorse is fraction-free Gauss-Jordan elimination (Bareiss-style exact
division by the previous pivot), which keeps every intermediate entry a minor
of the input.  Word-size modular elimination is used only to *screen*: a
full rank modulo p certifies a trivial kernel, and a set of rows independent
modulo p is a cheap candidate for a row basis.  Every kernel vector returned
is re-multiplied against the original matrix.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

try:
    from gmpy2 import divexact, mpz
except ImportError:  # pragma: no cover - plain ints are correct, just slower
    mpz = int

    def divexact(a, b):
        return a // b

# primes below 2**31 so products of residues fit in int64
SCREEN_PRIMES = (2147483647, 2147483629, 2147483587)

# below this many rows the row-preselection pass is not worth it
_PRESELECT_MIN_ROWS = 24


class LinalgError(ArithmeticError):
    """Internal failure of an exact linear-algebra invariant."""


class IntMatrix:
    """Dense matrix of Python ints.  Treat as immutable."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence[int]], ncols: int | None = None):
        self.rows = [list(map(int, r)) for r in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("empty matrix needs an explicit column count")
            ncols = len(self.rows[0])
        self.ncols = ncols
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged rows")

    @classmethod
    def from_rational_rows(cls, rows: Iterable[Sequence], ncols: int | None = None) -> IntMatrix:
        """Clear denominators row by row and divide each row by its content."""
        out = []
        for r in rows:
            fr = [Fraction(x) for x in r]
            den = lcm(*(x.denominator for x in fr)) if fr else 1
            ints = [x.numerator * (den // x.denominator) for x in fr]
            out.append(_primitive_row(ints))
        return cls(out, ncols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def apply(self, v: Sequence[int]) -> list[int]:
        return [sum(a * b for a, b in zip(r, v) if a and b) for r in self.rows]

    def select_rows(self, idx: Iterable[int]) -> IntMatrix:
        return IntMatrix([self.rows[i] for i in idx], self.ncols)

    def __repr__(self):
        return f"IntMatrix({self.nrows}x{self.ncols})"


def _primitive_row(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        g = gcd(g, x)
        if g == 1:
            return row
    return [x // g for x in row] if g > 1 else row


def normalize_vector(v: Sequence[int]) -> list[int]:
    """Scale an integer vector to content 1 with its first nonzero entry positive."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector cannot be normalized")
    lead = next(x for x in v if x)
    if lead < 0:
        g = -g
    return [x // g for x in v]


# -- modular screening ----------------------------------------------------------


def _mod_array(M: IntMatrix, p: int) -> np.ndarray:
    A = np.empty((M.nrows, M.ncols), dtype=np.int64)
    for i, r in enumerate(M.rows):
        A[i] = [x % p for x in r]
    return A


def row_basis_mod_p(M: IntMatrix, p: int = SCREEN_PRIMES[0]) -> list[int]:
    """Indices of rows forming a basis of the row space of ``M mod p``.

    Rows are scanned in order, so the result is the lexicographically first
    independent set.
    """
    if M.nrows == 0 or M.ncols == 0:
        return []
    A = _mod_array(M, p)
    # eliminate on the transpose: pivot columns of A^T are independent rows of A
    T = np.ascontiguousarray(A.T)
    rows, cols = T.shape
    chosen = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(T[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            T[[r, piv]] = T[[piv, r]]
        inv = pow(int(T[r, c]), -1, p)
        T[r] = (T[r] * inv) % p
        idx = np.nonzero(T[r + 1 :, c])[0] + r + 1
        if idx.size:
            T[idx] = (T[idx] - np.outer(T[idx, c], T[r]) % p) % p
        chosen.append(c)
        r += 1
    return chosen


def rank_mod_p(M: IntMatrix, p: int = SCREEN_PRIMES[0]) -> int:
    return len(row_basis_mod_p(M, p))


def kernel_is_trivial_mod_p(M: IntMatrix, primes: Sequence[int] = SCREEN_PRIMES) -> bool:
    """True only if the rational kernel of ``M`` is certainly trivial.

    rank mod p never exceeds the rational rank, so a full column rank modulo
    any prime is a proof.  False means "not certified", not "nontrivial".
    """
    if M.nrows < M.ncols:
        return False
    return any(rank_mod_p(M, p) == M.ncols for p in primes)


# -- exact elimination -------------------------------------------------------------


def rref_den(M: IntMatrix) -> tuple[list[list[int]], int, list[int]]:
    """Fraction-free reduced row echelon form.

    Returns ``(R, den, pivots)`` where ``R / den`` is the RREF of ``M`` (rows
    beyond ``len(pivots)`` are zero and dropped).  In each column the pivot
    row is the one whose entry has the fewest bits, ties going to the lowest
    row index.
    """
    a = [[mpz(x) for x in r] for r in M.rows]
    m, n = M.nrows, M.ncols
    pivots: list[int] = []
    d = mpz(1)
    i = 0
    for j in range(n):
        if i == m:
            break
        best, best_bits = -1, None
        for r in range(i, m):
            x = a[r][j]
            if x:
                b = x.bit_length()
                if best_bits is None or b < best_bits:
                    best, best_bits = r, b
                    if b == 1:
                        break
        if best < 0:
            continue
        if best != i:
            a[i], a[best] = a[best], a[i]
        pr = a[i]
        piv = pr[j]
        # pr is zero left of column j, so the update below also clears column j
        for k in range(m):
            if k == i:
                continue
            row = a[k]
            f = row[j]
            if f:
                a[k] = [divexact(piv * x - f * y, d) for x, y in zip(row, pr)]
            elif piv != d:
                a[k] = [divexact(piv * x, d) if x else x for x in row]
        d = piv
        pivots.append(j)
        i += 1
    den = int(d) if pivots else 1
    R = [[int(x) for x in r] for r in a[: len(pivots)]]
    for r, c in enumerate(pivots):
        if R[r][c] != den:
            raise LinalgError("fraction-free invariant broken: unequal pivots")
    return R, den, pivots


def _kernel_from_rref(R: list[list[int]], den: int, pivots: list[int], n: int) -> list[list[int]]:
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = den
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][f]
        basis.append(normalize_vector(v))
    return basis


def _verified(M: IntMatrix, basis: list[list[int]]) -> bool:
    return all(not any(M.apply(v)) for v in basis)


def kernel_basis(M: IntMatrix, screen: bool = True) -> list[list[int]]:
    """Basis of the rational right kernel as primitive integer vectors.

    The basis is the one read off the reduced row echelon form (one vector
    per non-pivot column, in column order), so it depends only on the row
    space of ``M``.  Each vector is checked against ``M`` before returning.
    """
    if M.ncols == 0:
        return []
    if M.nrows == 0:
        return [[int(i == j) for j in range(M.ncols)] for i in range(M.ncols)]
    if screen and kernel_is_trivial_mod_p(M, SCREEN_PRIMES[:1]):
        return []
    work = M
    if screen and M.nrows >= _PRESELECT_MIN_ROWS:
        rows = row_basis_mod_p(M)
        if len(rows) < M.nrows:
            work = M.select_rows(rows)
    R, den, pivots = rref_den(work)
    basis = _kernel_from_rref(R, den, pivots, M.ncols)
    if work is not M and not _verified(M, basis):
        # the modular row basis missed rational rank; redo on everything
        R, den, pivots = rref_den(M)
        basis = _kernel_from_rref(R, den, pivots, M.ncols)
    if not _verified(M, basis):
        raise LinalgError("kernel vector failed re-multiplication check")
    return basis


def rank(M: IntMatrix) -> int:
    """Exact rank over Q."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    full = min(M.nrows, M.ncols)
    if any(rank_mod_p(M, p) == full for p in SCREEN_PRIMES[:1]):
        return full
    return len(rref_den(M)[2])


def solve_rational_kernel_naive(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Textbook Gauss-Jordan over Fractions, kernel read off the RREF.

    Kept deliberately simple; it is the reference the fast path is tested against.
    """
    A = [[Fraction(x) for x in r] for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    i = 0
    for j in range(n):
        r = next((r for r in range(i, m) if A[r][j] != 0), None)
        if r is None:
            continue
        A[i], A[r] = A[r], A[i]
        p = A[i][j]
        A[i] = [x / p for x in A[i]]
        for k in range(m):
            if k != i and A[k][j] != 0:
                f = A[k][j]
                A[k] = [x - f * y for x, y in zip(A[k], A[i])]
        pivots.append(j)
        i += 1
        if i == m:
            break
    out = []
    for f in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -A[r][f]
        out.append(v)
    return out
