from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from x0models import arith

GENUS_ZERO = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25}


# brute-force oracles, independent of the factorization code


def phi_brute(n):
    return sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)


def p1_size(N):
    """|P^1(Z/N)|: primitive pairs (c, d) mod N up to unit scaling."""
    pairs = sum(1 for c in range(N) for d in range(N) if gcd(gcd(c, d), N) == 1)
    return pairs // phi_brute(N)


def nu2_brute(N):
    return sum(1 for a in range(N) if (a * a + 1) % N == 0)


def nu3_brute(N):
    return sum(1 for a in range(N) if (a * a - a + 1) % N == 0)


def nu_inf_brute(N):
    return sum(phi_brute(gcd(d, N // d)) for d in range(1, N + 1) if N % d == 0)


@pytest.mark.parametrize("n,expected", [(1, 1), (12, 4), (7, 6)])
def test_euler_phi_examples(n, expected):
    assert arith.euler_phi(n) == expected


def test_euler_phi_matches_count():
    for n in range(1, 400):
        assert arith.euler_phi(n) == phi_brute(n)


@pytest.mark.parametrize("N,expected", [(11, 12), (2, 3), (6, 12)])
def test_psi_examples(N, expected):
    assert arith.psi(N) == expected


def test_psi_is_projective_line_size():
    for N in range(1, 80):
        assert arith.psi(N) == p1_size(N)


@pytest.mark.parametrize("N,expected", [(9, 0), (11, 0), (7, 2)])
def test_nu3_examples(N, expected):
    assert arith.nu3(N) == expected


@pytest.mark.parametrize("N,expected", [(4, 0), (11, 0), (5, 2)])
def test_nu2_examples(N, expected):
    assert arith.nu2(N) == expected


def test_elliptic_counts_match_congruences():
    for N in range(1, 600):
        assert arith.nu2(N) == nu2_brute(N), N
        assert arith.nu3(N) == nu3_brute(N), N


@pytest.mark.parametrize("N,expected", [(1, 1), (4, 3), (11, 2)])
def test_nu_inf_examples(N, expected):
    assert arith.nu_inf(N) == expected


def test_nu_inf_matches_divisor_sum():
    for N in range(1, 600):
        assert arith.nu_inf(N) == nu_inf_brute(N)


@pytest.mark.parametrize("N,expected", [(11, 1), (2, 0), (25, 0)])
def test_genus_examples(N, expected):
    assert arith.genus(N) == expected


def test_genus_zero_levels():
    assert set(arith.GENUS_ZERO_LEVELS) == GENUS_ZERO
    for N in range(1, 101):
        assert (arith.genus(N) == 0) == (N in GENUS_ZERO), N


def test_level_invariants_consistency():
    for N in range(1, 10_001):
        inv = arith.LevelInvariants.of(N)
        assert 12 * (inv.genus - 1) + 3 * inv.nu2 + 4 * inv.nu3 + 6 * inv.nu_inf == inv.index


@pytest.mark.parametrize("N,m,expected", [(11, 4, (2, 4)), (11, 6, (4, 6)), (1, 12, (1, 2))])
def test_dim_spaces_examples(N, m, expected):
    assert arith.dim_spaces(N, m) == expected


@settings(max_examples=300)
@given(st.integers(1, 2000), st.integers(2, 20).map(lambda k: 2 * k))
def test_dim_m_minus_dim_s_is_cusp_count(N, m):
    s, M = arith.dim_spaces(N, m)
    assert M - s == arith.nu_inf(N)
    assert s >= 0


def test_dim_spaces_level_one_classical():
    # dim M_k(SL2(Z)) = floor(k/12) + (0 if k = 2 mod 12 else 1)
    for k in range(4, 80, 2):
        expected = k // 12 + (0 if k % 12 == 2 else 1)
        assert arith.dim_spaces(1, k)[1] == expected


def diag_degree_brute(N):
    total = 0
    r = int(N ** 0.5)
    while r * r > N:
        r -= 1
    for k in range(1, N + 1):
        if N % k == 0 and k * k > N:
            g = gcd(k, N // k)
            total += 2 * (k // g) * phi_brute(g)
    if r * r == N:
        total += phi_brute(r)
    return total


@pytest.mark.parametrize("N,expected", [(2, 4), (3, 6)])
def test_diag_degree_examples(N, expected):
    assert arith.diag_degree(N) == expected


def test_diag_degree_at_four():
    # k=4 gives 2*4 = 8 and the square-root term adds phi(2) = 1
    assert arith.diag_degree(4) == diag_degree_brute(4) == 9


def test_diag_degree_brute():
    for N in range(2, 300):
        assert arith.diag_degree(N) == diag_degree_brute(N)


@pytest.mark.parametrize("N,expected", [(2, 4), (11, 22)])
def test_total_degree_formula_examples(N, expected):
    assert arith.total_degree_formula(N) == expected
    assert arith.diag_degree(N) == expected


def test_total_degree_equals_diag_degree():
    bad = [N for N in range(2, 10_001) if arith.total_degree_formula(N) != arith.diag_degree(N)]
    assert bad == []


@pytest.mark.parametrize("N", [2, 36, 97])
def test_psi_identity_examples(N):
    assert arith.psi_identity_check(N)


def test_psi_identity_range():
    assert all(arith.psi_identity_check(N) for N in range(2, 10_001))


def test_min_degree_weight4_examples():
    assert arith.min_degree_weight4(14) == 4
    assert arith.min_degree_weight4(23) == 6
    with pytest.raises(ValueError):
        arith.min_degree_weight4(11)
    with pytest.raises(ValueError):
        arith.min_degree_weight4(25)


def test_min_degree_weight4_is_dim_plus_genus():
    for N in range(2, 201):
        if N in GENUS_ZERO or N == 11:
            continue
        s4, _ = arith.dim_spaces(N, 4)
        assert arith.min_degree_weight4(N) == s4 + arith.genus(N) - 1


def test_weight6_at_eleven():
    s6, _ = arith.dim_spaces(11, 6)
    assert s6 + arith.genus(11) - 1 == 4


def test_rejects_nonpositive():
    with pytest.raises(ValueError):
        arith.psi(0)
    with pytest.raises(ValueError):
        arith.euler_phi(-3)
