"""Acceptance criteria 1-10.  Each test prints exactly one PASS/FAIL line."""

import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import test_implicit as ti
import test_linalg as tl
import test_qseries as tq
from conftest import ACCEPTANCE_LINES
from x0models import arith, forms, implicit, linalg, modpoly

CASES = 1000


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def phis():
    return {N: modpoly.phi(N) for N in range(2, 7)}


def test_criterion_01_q_expansions():
    d = forms.delta(4)
    e = forms.e4_cubed(4)
    got_d = [int(d[k]) for k in range(1, 4)]
    got_e = [int(e[k]) for k in range(4)]
    ok_d = got_d == [1, -24, 252]
    ok_e = got_e == [1, 720, 172800, 13824000]
    record(1, ok_d and ok_e, f"Delta q..q^3 = {got_d} (want [1, -24, 252]); E4^3 q^0..q^3 = {got_e} (want [1, 720, 172800, 13824000])")


def test_criterion_02_level_eleven():
    s4, _ = arith.dim_spaces(11, 4)
    s6, _ = arith.dim_spaces(11, 6)
    g = arith.genus(11)
    got = (s4, s6, g, arith.nu_inf(11), arith.psi(11), s6 + g - 1)
    record(2, got == (2, 4, 1, 2, 12, 4), f"(dim S4, dim S6, g, nu_inf, psi, dim S6 + g - 1) at N=11 = {got}")


def test_criterion_03_total_equals_diag():
    t = time.perf_counter()
    bad = [N for N in range(2, 10_001) if arith.total_degree_formula(N) != arith.diag_degree(N)]
    dt = time.perf_counter() - t
    record(3, not bad and dt < 10, f"2 <= N <= 10^4: {len(bad)} failures, {dt:.2f}s (< 10s)")


def test_criterion_04_psi_identity():
    t = time.perf_counter()
    bad = [N for N in range(2, 10_001) if arith.psi_identity_sum(N) != arith.psi(N)]
    dt = time.perf_counter() - t
    record(4, not bad and dt < 10, f"2 <= N <= 10^4: {len(bad)} failures, {dt:.2f}s (< 10s)")


def test_criterion_05_phi_polynomials(phis):
    failures = []
    for N, P in phis.items():
        psi = arith.psi(N)
        checks = {
            "deg": P.deg_x == P.deg_y == psi,
            "symmetric": P.is_symmetric(),
            "monic": P[(psi, 0)] == 1,
            "total=formula": modpoly.total_degree(P) == arith.total_degree_formula(N),
            "diag=formula": modpoly.diagonal_degree(P) == arith.diag_degree(N),
            "total=diag": modpoly.total_degree(P) == modpoly.diagonal_degree(P),
            "residual": modpoly.residual_is_zero(P, N),
        }
        failures += [f"N={N}:{k}" for k, v in checks.items() if not v]
    record(5, not failures, f"N in 2..6, residual certified to 2*psi^2 past the pole order; failures: {failures or 'none'}")


def test_criterion_06_kronecker(phis):
    got = {N: modpoly.kronecker_check(phis[N], N) for N in (2, 3, 5)}
    record(6, all(got.values()), f"Phi_N = (x^N - y)(x - y^N) mod N: {got}")


def test_criterion_07_search_ab():
    t = time.perf_counter()
    summary = {}
    ok = True
    for N in range(2, 9):
        hits = implicit.search_ab(N, 5, max_hits=1)
        if not hits:
            summary[N] = None
            ok = False
            continue
        a, b, rep = hits[0]
        eq = rep.equation
        residual = rep.residual_prec >= implicit.required_precision(N, 12, rep.found_degree)
        good = (
            rep.found_degree == arith.psi(N)
            and rep.kernel_dim == 1
            and eq.is_integral()
            and linalg.normalize_vector([c for _, c in eq.terms()]) == [c for _, c in eq.terms()]
            and residual
        )
        ok &= good
        summary[N] = (a, b, rep.found_degree)
    record(7, ok, f"first hit (alpha, beta, degree) per N: {summary}, {time.perf_counter() - t:.1f}s")


def test_criterion_08_cross_module(phis):
    got = {}
    for N in (2, 3):
        d = arith.total_degree_formula(N)
        f, g, h = implicit.weight24_j_triple(N, implicit.required_precision(N, 24, d))
        rep = implicit.minimal_model(f, g, h, d, family="weight24_j")
        got[N] = rep.equation == modpoly.homogenize(phis[N])
    record(8, all(got.values()), f"homogenize(Phi_N) == weight-24 minimal model: {got}")


def test_criterion_09_divisors():
    t = time.perf_counter()
    bad = []
    for N in range(2, 501):
        psi = arith.psi(N)
        if forms.divisor_delta(N).degree != psi or forms.divisor_delta_dilated(N).degree != psi:
            bad.append((N, "degree"))
        if len(forms.cusps(N)) != arith.nu_inf(N):
            bad.append((N, "cusps"))
        s24, _ = arith.dim_spaces(N, 24)
        if s24 + arith.genus(N) - 1 - forms.min_sum_weight24_triple(N) != arith.total_degree_formula(N):
            bad.append((N, "min-sum"))
    record(9, not bad, f"2 <= N <= 500: {len(bad)} failures, {time.perf_counter() - t:.2f}s")


def _run_counted(prop, *strategies):
    count = [0]

    @settings(max_examples=CASES, database=None)
    @given(st.tuples(*strategies))
    def wrapped(args):
        count[0] += 1
        prop(*args)

    wrapped()
    return count[0]


def test_criterion_10_properties():
    t = time.perf_counter()

    def ring(a, b, c):
        assert ((a + b) + c).agrees_with(a + (b + c))
        assert (a * b).agrees_with(b * a)
        assert (a * (b + c)).agrees_with(a * b + a * c)

    def dilate(a, b, N):
        assert (a * b).dilate(N).agrees_with(a.dilate(N) * b.dilate(N))

    def exact(M):
        for v in linalg.kernel_basis(M):
            assert not any(M.apply(v))

    def oracle(M):
        naive = linalg.solve_rational_kernel_naive(M.rows)
        fast = linalg.kernel_basis(M)
        assert fast == [linalg.normalize_vector(linalg.IntMatrix.from_rational_rows([v]).rows[0]) for v in naive]

    def scaling(matrix, tail, k, c):
        base = implicit.minimal_model(*ti.synthetic_triple(matrix, tail, k), 3, prec=ti.SYN_PREC)
        scaled = implicit.minimal_model(*ti.synthetic_triple(matrix, tail, k, c), 3, prec=ti.SYN_PREC)
        assert scaled.equation == base.equation

    def permutation(matrix, tail, k, pi):
        fs = ti.synthetic_triple(matrix, tail, k)
        base = implicit.minimal_model(*fs, 3, prec=ti.SYN_PREC)
        moved = implicit.minimal_model(*(fs[i] for i in pi), 3, prec=ti.SYN_PREC)
        assert moved.equation == base.equation.permute([pi.index(a) for a in range(3)])

    suites = {
        "ring axioms": (ring, tq.series(max_len=70), tq.series(max_len=70), tq.series(max_len=70)),
        "dilate morphism": (dilate, tq.series(max_len=70), tq.series(max_len=70), st.integers(1, 5)),
        "kernel exactness": (exact, tl.matrices()),
        "naive-oracle agreement": (oracle, tl.matrices()),
        "scaling invariance": (scaling, ti.matrices3, ti.tails, st.sampled_from([2, 3]), ti.scalars),
        "permutation equivariance": (permutation, ti.matrices3, ti.tails, st.sampled_from([2, 3]), st.permutations([0, 1, 2])),
    }
    counts = {name: _run_counted(*args) for name, args in suites.items()}
    dt = time.perf_counter() - t
    ok = all(n >= CASES for n in counts.values()) and dt < 60
    record(10, ok, f"cases per suite {counts}, 0 failures, {dt:.1f}s (< 60s)")
