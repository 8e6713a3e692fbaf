"""Closed-form arithmetic of the modular curves X_0(N).

Everything here is exact integer arithmetic (with ``Fraction`` for the few
intermediate quantities that are not integral a priori).  A formula whose
final value fails to be an integer raises :class:`ConsistencyError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

# the levels N with X_0(N) of genus 0
GENUS_ZERO_LEVELS = frozenset({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25})


class ConsistencyError(ArithmeticError):
    """An exact formula produced a non-integral or otherwise impossible value."""


def _check_positive(n: int, name: str = "n", minimum: int = 1) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"{name} must be an int, got {type(n).__name__}")
    if n < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {n}")


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n`` as ``((p, e), ...)`` with p increasing.

    Trial division with a 2-3-5 wheel.
    """
    _check_positive(n)
    out = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    # offsets cycle through residues coprime to 30
    steps = (4, 2, 4, 2, 4, 6, 2, 6)
    p, i = 7, 0
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += steps[i]
        i = (i + 1) % 8
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def divisors(n: int) -> list[int]:
    """All positive divisors of ``n`` in increasing order."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    _check_positive(n)
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def psi(N: int) -> int:
    """Dedekind psi: ``N * prod_{p | N} (1 + 1/p)``, the index of Gamma_0(N)."""
    _check_positive(N, "N")
    result = N
    for p, _ in factorize(N):
        result = result // p * (p + 1)
    return result


def kronecker_minus3(p: int) -> int:
    """The symbol (-3/p) for a prime p: 0 at p=3, +1 if p = 1 mod 3, else -1.

    For p=2 this gives -1, which agrees with the Kronecker symbol (-3/2).
    """
    if p == 3:
        return 0
    return 1 if p % 3 == 1 else -1


def kronecker_minus1(p: int) -> int:
    """The symbol (-1/p) for a prime p: 0 at p=2, +1 if p = 1 mod 4, else -1."""
    if p == 2:
        return 0
    return 1 if p % 4 == 1 else -1


def nu2(N: int) -> int:
    """Number of elliptic points of order 2 on X_0(N)."""
    _check_positive(N, "N")
    if N % 4 == 0:
        return 0
    result = 1
    for p in prime_divisors(N):
        result *= 1 + kronecker_minus1(p)
    return result


def nu3(N: int) -> int:
    """Number of elliptic points of order 3 on X_0(N)."""
    _check_positive(N, "N")
    if N % 9 == 0:
        return 0
    result = 1
    for p in prime_divisors(N):
        result *= 1 + kronecker_minus3(p)
    return result


def nu_inf(N: int) -> int:
    """Number of cusps: sum over d | N of phi(gcd(d, N/d))."""
    _check_positive(N, "N")
    return sum(euler_phi(gcd(d, N // d)) for d in divisors(N))


def _integral(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise ConsistencyError(f"{what} evaluated to non-integer {value}")
    return value.numerator


def genus(N: int) -> int:
    _check_positive(N, "N")
    g = (
        1
        + Fraction(psi(N), 12)
        - Fraction(nu2(N), 4)
        - Fraction(nu3(N), 3)
        - Fraction(nu_inf(N), 2)
    )
    g = _integral(g, f"genus({N})")
    if g < 0:
        raise ConsistencyError(f"genus({N}) = {g} is negative")
    return g


@dataclass(frozen=True)
class LevelInvariants:
    N: int
    index: int
    nu2: int
    nu3: int
    nu_inf: int
    genus: int

    @classmethod
    def of(cls, N: int) -> LevelInvariants:
        inv = cls(N, psi(N), nu2(N), nu3(N), nu_inf(N), genus(N))
        if 12 * (inv.genus - 1) + 3 * inv.nu2 + 4 * inv.nu3 + 6 * inv.nu_inf != inv.index:
            raise ConsistencyError(f"Riemann-Hurwitz check failed for N={N}")
        return inv


def dim_spaces(N: int, m: int) -> tuple[int, int]:
    """``(dim S_m(Gamma_0(N)), dim M_m(Gamma_0(N)))`` for even ``m >= 4``."""
    _check_positive(N, "N")
    if m < 4 or m % 2:
        raise ValueError(f"weight must be even and >= 4, got {m}")
    g, t = genus(N), nu_inf(N)
    dim_s = (m - 1) * (g - 1) + (m // 2 - 1) * t + (m // 4) * nu2(N) + (m // 3) * nu3(N)
    if dim_s < 0:
        raise ConsistencyError(f"negative dimension for N={N}, m={m}")
    return dim_s, dim_s + t


def phi_sqrt(N: int) -> int:
    """phi(sqrt(N)), taken to be 0 when N is not a perfect square."""
    r = isqrt(N)
    return euler_phi(r) if r * r == N else 0


def _large_divisors(N: int) -> list[int]:
    # divisors k with sqrt(N) < k <= N
    return [k for k in divisors(N) if k * k > N]


def diag_degree(N: int) -> int:
    """Degree of Phi_N(x, x) by the classical divisor-sum formula."""
    _check_positive(N, "N", 2)
    total = Fraction(0)
    for k in _large_divisors(N):
        g = gcd(k, N // k)
        total += Fraction(k, g) * euler_phi(g)
    return _integral(2 * total + phi_sqrt(N), f"diag_degree({N})")


def total_degree_formula(N: int) -> int:
    """Total degree of Phi_N obtained from the degree-of-curve formula."""
    _check_positive(N, "N", 2)
    total = Fraction(0)
    for k in _large_divisors(N):
        g = gcd(k, N // k)
        total += euler_phi(g) * Fraction(N // k, g)
    return _integral(2 * psi(N) - phi_sqrt(N) - 2 * total, f"total_degree_formula({N})")


def psi_identity_sum(N: int) -> Fraction:
    """sum_{k | N} (N/k) * phi(gcd(k, N/k)) / gcd(k, N/k), exactly."""
    total = Fraction(0)
    for k in divisors(N):
        g = gcd(k, N // k)
        total += Fraction(N // k, g) * euler_phi(g)
    return total


def psi_identity_check(N: int) -> bool:
    _check_positive(N, "N", 2)
    return psi_identity_sum(N) == psi(N)


def min_degree_weight4(N: int) -> int:
    """Smallest degree of a plane model of X_0(N) built from weight-4 cusp forms.

    Equals ``psi(N)/3 - nu3(N)/3 - nu_inf(N)``.  Levels of genus 0 are
    rejected, as is N=11 where weight 4 is too small (the minimal model there
    uses weight 6 and has degree 4).
    """
    _check_positive(N, "N", 2)
    if N in GENUS_ZERO_LEVELS:
        raise ValueError(f"X_0({N}) has genus 0; no weight-4 cuspidal model")
    if N == 11:
        raise ValueError("N=11 needs weight 6; the minimal degree there is 4")
    value = Fraction(psi(N), 3) - Fraction(nu3(N), 3) - nu_inf(N)
    return _integral(value, f"min_degree_weight4({N})")
