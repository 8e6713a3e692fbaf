import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from x0models import forms, linalg
from x0models.linalg import IntMatrix, kernel_basis, rank, solve_rational_kernel_naive

entries = st.integers(-99, 99)


@st.composite
def matrices(draw, max_dim=12):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    # low-rank products exercise nontrivial kernels far more often than uniform entries
    if draw(st.booleans()):
        r = draw(st.integers(1, min(m, n)))
        A = [[draw(st.integers(-9, 9)) for _ in range(r)] for _ in range(m)]
        B = [[draw(st.integers(-9, 9)) for _ in range(n)] for _ in range(r)]
        rows = [[sum(A[i][t] * B[t][j] for t in range(r)) for j in range(n)] for i in range(m)]
    else:
        rows = [[draw(entries) for _ in range(n)] for _ in range(m)]
    return IntMatrix(rows, n)


def same_span(basis_a, basis_b):
    """Rational spans agree (both given as lists of vectors)."""
    if len(basis_a) != len(basis_b):
        return False
    if not basis_a:
        return True
    joint = [[Fraction(x) for x in v] for v in basis_a + basis_b]
    return linalg.rank(IntMatrix.from_rational_rows(joint)) == len(basis_a)


def test_identity_kernel_trivial():
    assert kernel_basis(IntMatrix.identity(3)) == []


def test_all_ones_row():
    basis = kernel_basis(IntMatrix([[1, 1, 1]]))
    assert len(basis) == 2
    for v in basis:
        assert sum(v) == 0
        assert next(x for x in v if x) > 0


def test_zero_matrix():
    assert rank(IntMatrix([[0, 0], [0, 0]])) == 0
    assert len(kernel_basis(IntMatrix([[0, 0, 0]]))) == 3
    assert rank(IntMatrix.identity(5)) == 5


def test_weight12_rank_at_five():
    basis = forms.weight12_basis(5, 8)
    M = IntMatrix([[f[e] for e in (0, 1, 2, 5)] for f in basis])
    assert rank(M) == 4


def test_rational_ingestion():
    M = IntMatrix.from_rational_rows([[Fraction(1, 2), Fraction(1, 3)], [2, 4]])
    assert M.rows == [[3, 2], [1, 2]]


def test_rref_pivot_prefers_small_entries():
    R, den, piv = linalg.rref_den(IntMatrix([[1000, 1], [3, 1]]))
    # the 3 is chosen first, so den is det [[3, 1], [1000, 1]] rather than its negative
    assert piv == [0, 1] and den == 3 - 1000


def test_mod_p_screen_sound():
    # singular over Q: never certified trivial
    M = IntMatrix([[1, 2, 3], [2, 4, 6], [1, 0, 1], [3, 2, 5]])
    assert not linalg.kernel_is_trivial_mod_p(M)
    assert len(kernel_basis(M)) == 1


def test_preselection_fallback():
    # rows dependent mod p but independent over Q force the full-matrix path
    p = linalg.SCREEN_PRIMES[0]
    rows = [[1, 0, 0], [0, 1, 0], [p, 0, 0]] * 9 + [[0, 0, 1]]
    M = IntMatrix(rows)
    assert kernel_basis(M) == []


@settings(max_examples=1000)
@given(matrices())
def test_kernel_exact_and_normalized(M):
    basis = kernel_basis(M)
    for v in basis:
        assert not any(M.apply(v))
        g = 0
        for x in v:
            g = gcd(g, x)
        assert g == 1
        assert next(x for x in v if x) > 0
    assert rank(M) + len(basis) == M.ncols


@settings(max_examples=1000)
@given(matrices())
def test_kernel_agrees_with_naive_oracle(M):
    fast = kernel_basis(M)
    naive = solve_rational_kernel_naive(M.rows)
    assert len(fast) == len(naive)
    if naive:
        # both read the kernel off an RREF, so after normalization they are identical
        normalized = [linalg.normalize_vector(IntMatrix.from_rational_rows([v]).rows[0]) for v in naive]
        assert fast == normalized
    assert same_span(fast, naive)


def test_large_system_against_oracle():
    rng = random.Random(11)
    n = 30
    B = [[rng.randint(-(10**20), 10**20) for _ in range(n)] for _ in range(26)]
    A = [[rng.randint(-5, 5) for _ in range(26)] for _ in range(40)]
    rows = [[sum(a * b for a, b in zip(ar, col)) for col in zip(*B)] for ar in A]
    M = IntMatrix(rows)
    fast = kernel_basis(M)
    assert len(fast) == n - 26
    assert same_span(fast, solve_rational_kernel_naive(rows))
