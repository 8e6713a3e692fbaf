"""Concrete modular forms, cusps of Gamma_0(N) and the divisors of Delta-type forms."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from . import arith
from .qseries import LaurentSeries


@dataclass(frozen=True)
class ModularForm:
    """A q-expansion at infinity together with its weight and level.

    The level is bookkeeping: products take the lcm, dilation by N multiplies
    it by N.  Nothing here proves modularity.
    """

    series: LaurentSeries
    weight: int
    level: int = 1
    label: str = ""

    def __post_init__(self):
        if self.weight < 0 or self.weight % 2:
            raise ValueError(f"weight must be even and non-negative, got {self.weight}")
        if self.level < 1:
            raise ValueError(f"level must be positive, got {self.level}")

    @property
    def prec(self) -> int:
        return self.series.prec

    @property
    def is_cusp_form(self) -> bool:
        return self.series.val >= 1

    def __getitem__(self, e: int) -> Fraction:
        return self.series[e]

    def __mul__(self, other):
        if isinstance(other, ModularForm):
            return ModularForm(
                self.series * other.series,
                self.weight + other.weight,
                lcm(self.level, other.level),
                f"{self.label}*{other.label}",
            )
        return ModularForm(self.series.scale(other), self.weight, self.level, f"{other}*{self.label}")

    __rmul__ = __mul__

    def __add__(self, other: ModularForm) -> ModularForm:
        if self.weight != other.weight:
            raise ValueError(f"cannot add forms of weights {self.weight} and {other.weight}")
        return ModularForm(
            self.series + other.series,
            self.weight,
            lcm(self.level, other.level),
            f"{self.label}+{other.label}",
        )

    def __neg__(self):
        return ModularForm(-self.series, self.weight, self.level, f"-{self.label}")

    def __pow__(self, e: int) -> ModularForm:
        return ModularForm(self.series**e, self.weight * e, self.level, f"{self.label}^{e}")

    def dilate(self, N: int) -> ModularForm:
        return ModularForm(self.series.dilate(N), self.weight, self.level * N, f"{self.label}({N}z)")

    def at_level(self, N: int) -> ModularForm:
        """The same form viewed on Gamma_0(N); ``N`` must be a multiple of the level."""
        if N % self.level:
            raise ValueError(f"level {self.level} does not divide {N}")
        return ModularForm(self.series, self.weight, N, self.label)

    def truncate(self, prec: int) -> ModularForm:
        return ModularForm(self.series.truncate(prec), self.weight, self.level, self.label)

    def relabel(self, label: str) -> ModularForm:
        return ModularForm(self.series, self.weight, self.level, label)


# -- level one forms ----------------------------------------------------------


def divisor_sigma_table(k: int, n: int) -> list[int]:
    """``[sigma_k(0)=0, sigma_k(1), ..., sigma_k(n-1)]`` by a divisor sieve."""
    table = [0] * n
    for d in range(1, n):
        dk = d**k
        for m in range(d, n, d):
            table[m] += dk
    return table


def _eisenstein(prec: int, k: int, c: int) -> LaurentSeries:
    sig = divisor_sigma_table(k, prec)
    return LaurentSeries.from_ints([1] + [c * s for s in sig[1:]], 0, prec)


@lru_cache(maxsize=32)
def eisenstein_e4(prec: int) -> ModularForm:
    """E_4 = 1 + 240 sum sigma_3(n) q^n + O(q^prec)."""
    if prec < 1:
        raise ValueError(f"prec must be >= 1, got {prec}")
    return ModularForm(_eisenstein(prec, 3, 240), 4, 1, "E4")


@lru_cache(maxsize=32)
def eisenstein_e6(prec: int) -> ModularForm:
    if prec < 1:
        raise ValueError(f"prec must be >= 1, got {prec}")
    return ModularForm(_eisenstein(prec, 5, -504), 6, 1, "E6")


@lru_cache(maxsize=32)
def e4_cubed(prec: int) -> ModularForm:
    return (eisenstein_e4(prec) ** 3).relabel("E4^3")


@lru_cache(maxsize=32)
def delta(prec: int) -> ModularForm:
    """Ramanujan's Delta = (E4^3 - E6^2)/1728 + O(q^prec)."""
    if prec < 2:
        raise ValueError(f"prec must be >= 2, got {prec}")
    diff = e4_cubed(prec).series - eisenstein_e6(prec).series ** 2
    nums = diff.numerators
    if any(c % 1728 for c in nums):
        raise arith.ConsistencyError("E4^3 - E6^2 is not divisible by 1728")
    series = LaurentSeries.from_ints([c // 1728 for c in nums], diff.val, prec)
    return ModularForm(series, 12, 1, "Delta")


@lru_cache(maxsize=32)
def j_invariant(prec: int) -> ModularForm:
    """j = E4^3/Delta = q^-1 + 744 + 196884 q + ... + O(q^prec)."""
    if prec < 1:
        raise ValueError(f"prec must be >= 1, got {prec}")
    # Delta = q*(unit): relative precision prec + 1 needs Delta to O(q^(prec+2))
    series = (e4_cubed(prec + 2).series / delta(prec + 2).series).truncate(prec)
    return ModularForm(series, 0, 1, "j")


def weight12_basis(N: int, prec: int) -> tuple[ModularForm, ModularForm, ModularForm, ModularForm]:
    """Delta, E4^3, Delta(N.), E4^3(N.) on Gamma_0(N), each known to O(q^prec)."""
    base = -(-(prec - 1) // N) + 1  # dilation keeps N*(base-1)+1 >= prec
    d, e = delta(prec), e4_cubed(prec)
    dn = delta(max(base, 2)).dilate(N).truncate(prec)
    en = e4_cubed(base).dilate(N).truncate(prec)
    return (d.at_level(N), e.at_level(N), dn, en)


# -- cusps ----------------------------------------------------------------------


@dataclass(frozen=True)
class CuspRep:
    """Representative p/q of a cusp of Gamma_0(N); ``k = gcd(q, N)``."""

    p: int
    q: int
    k: int
    width: int
    N: int

    @property
    def label(self) -> str:
        return f"{self.p}/{self.q}"

    @property
    def is_infinity(self) -> bool:
        return self.k == self.N

    @property
    def count_class(self) -> int:
        """Number of cusps sharing this value of k."""
        return arith.euler_phi(gcd(self.k, self.N // self.k))


def cusp_width(N: int, k: int) -> int:
    return N // (k * gcd(k, N // k))


@lru_cache(maxsize=1024)
def cusps(N: int) -> tuple[CuspRep, ...]:
    """One representative per cusp of X_0(N), ordered by (k, p).

    For each k | N the cusps with ``gcd(q, N) = k`` are p/k with p running over
    the units modulo gcd(k, N/k); each residue is lifted to the smallest
    non-negative p coprime to k.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    out = []
    for k in arith.divisors(N):
        g = gcd(k, N // k)
        for a in range(g):
            if gcd(a, g) != 1:
                continue
            p = a
            while gcd(p, k) != 1:
                p += g
            out.append(CuspRep(p, k, k, cusp_width(N, k), N))
    return tuple(out)


# -- divisors -------------------------------------------------------------------


@dataclass(frozen=True)
class DivisorQ:
    """Finitely supported Q-divisor on X_0(N).

    ``values`` holds resolved multiplicities keyed by point label.  ``blocks``
    holds groups of points whose individual multiplicities are unknown but whose
    total degree is known (the zeros of E4^3 on the orbit of (1+sqrt(-3))/2).
    Cusp labels are ``"cusp:p/q"``; block labels start with ``"rho-orbit"``.
    """

    N: int
    values: dict = field(default_factory=dict)
    blocks: dict = field(default_factory=dict)

    @property
    def degree(self) -> Fraction:
        return sum(self.values.values(), Fraction(0)) + sum(self.blocks.values(), Fraction(0))

    @property
    def support(self) -> frozenset:
        return frozenset(k for k, v in self.values.items() if v) | frozenset(
            k for k, v in self.blocks.items() if v
        )

    def __getitem__(self, label: str) -> Fraction:
        if label in self.blocks:
            raise KeyError(f"multiplicities inside block {label!r} are not resolved")
        return self.values.get(label, Fraction(0))

    def __add__(self, other: DivisorQ) -> DivisorQ:
        if self.N != other.N:
            raise ValueError("divisors live on different curves")
        values = dict(self.values)
        for k, v in other.values.items():
            values[k] = values.get(k, Fraction(0)) + v
        blocks = dict(self.blocks)
        for k, v in other.blocks.items():
            blocks[k] = blocks.get(k, Fraction(0)) + v
        return DivisorQ(self.N, values, blocks)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values.values())

    def is_effective(self) -> bool:
        return all(v >= 0 for v in self.values.values()) and all(
            v >= 0 for v in self.blocks.values()
        )

    def to_dict(self) -> dict:
        rows = [
            {"label": k, "num": v.numerator, "den": v.denominator}
            for k, v in sorted(self.values.items())
        ]
        rows += [
            {"label": k, "num": v.numerator, "den": v.denominator, "block": True}
            for k, v in sorted(self.blocks.items())
        ]
        return rows


def _cusp_divisor(N: int, mult) -> DivisorQ:
    return DivisorQ(N, {f"cusp:{c.label}": mult(c) for c in cusps(N)})


def divisor_delta(N: int) -> DivisorQ:
    """div(Delta) on X_0(N): multiplicity (N/k)/gcd(k, N/k) at the cusps of class k."""
    return _cusp_divisor(N, lambda c: Fraction(N // c.k, gcd(c.k, N // c.k)))


def divisor_delta_dilated(N: int) -> DivisorQ:
    """div(Delta(N.)) on X_0(N): multiplicity k/gcd(k, N/k) at class k."""
    return _cusp_divisor(N, lambda c: Fraction(c.k, gcd(c.k, N // c.k)))


def divisor_e4_cubed(N: int) -> DivisorQ:
    # zeros lie on Gamma_0(N)-orbits of SL2(Z).rho; the individual m_gamma are not resolved
    return DivisorQ(N, {}, {"rho-orbit": Fraction(arith.psi(N))})


def divisor_e4_cubed_dilated(N: int) -> DivisorQ:
    return DivisorQ(N, {}, {"rho-orbit/N": Fraction(arith.psi(N))})


def elliptic_correction(m: int, e: int) -> Fraction:
    """Fractional part of (m/2)(1 - 1/e): what div(f) carries beyond c'_f at an order-e point."""
    x = Fraction(m, 2) * (1 - Fraction(1, e))
    return x - (x.numerator // x.denominator)


def c_prime(div: DivisorQ, m: int) -> DivisorQ:
    """The integral effective divisor c'_f attached to a weight-m form with divisor ``div``.

    Only weights where every elliptic correction vanishes are supported; the
    individual elliptic points are not labelled here.
    """
    N = div.N
    for e, count in ((2, arith.nu2(N)), (3, arith.nu3(N))):
        if count and elliptic_correction(m, e):
            raise NotImplementedError(
                f"weight {m} has a nonzero order-{e} elliptic correction on X_0({N})"
            )
    if not (div.is_integral() and div.is_effective()):
        raise arith.ConsistencyError("c'_f is not integral and effective")
    return div


def c_cusp(div: DivisorQ, m: int) -> DivisorQ:
    """c_f = c'_f minus the sum of all cusps, for a cusp form f."""
    cp = c_prime(div, m)
    minus = DivisorQ(div.N, {f"cusp:{c.label}": Fraction(-1) for c in cusps(div.N)})
    out = cp + minus
    if not out.is_effective():
        raise arith.ConsistencyError("c_f is not effective; form is not cuspidal")
    return out


def weight24_triple_divisors(N: int) -> tuple[DivisorQ, DivisorQ, DivisorQ]:
    """c-divisors of Delta*Delta(N.), E4^3*Delta(N.), E4^3(N.)*Delta."""
    d, dn = divisor_delta(N), divisor_delta_dilated(N)
    e, en = divisor_e4_cubed(N), divisor_e4_cubed_dilated(N)
    return c_cusp(d + dn, 24), c_cusp(e + dn, 24), c_cusp(en + d, 24)


def min_sum_from_divisors(N: int) -> Fraction:
    """sum over points of min of the three c-divisors of the weight-24 j-map triple.

    Points outside the cusps contribute 0: Delta*Delta(N.) has no zeros there.
    """
    a, b, c = weight24_triple_divisors(N)
    labels = set(a.values) | set(b.values) | set(c.values)
    return sum((min(a[x], b[x], c[x]) for x in labels), Fraction(0))


def min_sum_weight24_triple(N: int) -> int:
    """Closed form of the min-sum: sum_k phi(g) min(k, N/k)/g - nu_inf(N), g = gcd(k, N/k)."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    total = Fraction(0)
    for k in arith.divisors(N):
        g = gcd(k, N // k)
        total += arith.euler_phi(g) * Fraction(min(k, N // k), g)
    total -= arith.nu_inf(N)
    if total.denominator != 1:
        raise arith.ConsistencyError(f"min-sum for N={N} is not integral: {total}")
    return total.numerator


def cusp_table(N: int, divisor: DivisorQ | None = None) -> dict:
    """JSON-ready table of cusps (and optionally a divisor)."""
    out = {
        "N": N,
        "cusps": [
            {"p": c.p, "q": c.q, "k": c.k, "width": c.width, "count_class": c.count_class}
            for c in cusps(N)
        ],
    }
    if divisor is not None:
        out["divisor"] = divisor.to_dict()
    return out


def cusp_table_json(N: int, divisor: DivisorQ | None = None) -> str:
    return json.dumps(cusp_table(N, divisor), sort_keys=True)
