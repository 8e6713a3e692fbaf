"""Plane models C(f, g, h): implicit equations of q-parametrized curves.

A degree-d relation P(f, g, h) = 0 is a weight d*m form on Gamma_0(N), so if
its q-expansion vanishes past d*m*psi(N)/12 it vanishes identically.  The
working precision always exceeds that bound, which makes every residual check
here a proof rather than a heuristic.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb, lcm
from typing import Iterator, Sequence

from . import arith, forms, linalg
from .forms import ModularForm
from .qseries import LaurentSeries

log = logging.getLogger(__name__)

PRECISION_MARGIN = 16

FAMILIES = ("weight12_ab", "weight24_j")


class ModelError(RuntimeError):
    """No model could be produced for the given input."""


class AnomalousKernelError(ModelError):
    """The first nonzero vanishing space has dimension > 1."""

    def __init__(self, message: str, report: ModelReport):
        super().__init__(message)
        self.report = report


def monomials(d: int) -> list[tuple[int, int, int]]:
    """Exponent triples (i, j, k) with i+j+k = d, lexicographically descending."""
    return [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]


@dataclass(frozen=True)
class HomogPoly3:
    """Homogeneous integer polynomial in x0, x1, x2.

    Construct through :meth:`normalized` to get the canonical representative:
    content 1, and the coefficient of the lexicographically largest monomial
    positive.
    """

    degree: int
    coeffs: dict = field(hash=False)

    def __post_init__(self):
        if not self.coeffs or not any(self.coeffs.values()):
            raise ValueError("polynomial has no nonzero coefficient")
        if any(sum(e) != self.degree for e in self.coeffs):
            raise ValueError("not homogeneous of the stated degree")

    @classmethod
    def normalized(cls, degree: int, coeffs: dict) -> HomogPoly3:
        terms = sorted(((e, int(c)) for e, c in coeffs.items() if c), reverse=True)
        vec = linalg.normalize_vector([c for _, c in terms])
        return cls(degree, {e: c for (e, _), c in zip(terms, vec)})

    def __eq__(self, other):
        if not isinstance(other, HomogPoly3):
            return NotImplemented
        return self.degree == other.degree and self.terms() == other.terms()

    def __hash__(self):
        return hash((self.degree, tuple(self.terms())))

    def terms(self) -> list[tuple[tuple[int, int, int], int]]:
        return sorted(((e, c) for e, c in self.coeffs.items() if c), reverse=True)

    def permute(self, perm: Sequence[int]) -> HomogPoly3:
        """Rename variable x_a to x_perm[a] and renormalize."""
        out = {}
        for e, c in self.coeffs.items():
            new = [0, 0, 0]
            for a in range(3):
                new[perm[a]] = e[a]
            out[tuple(new)] = c
        return HomogPoly3.normalized(self.degree, out)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs.values())

    def substitute(self, f: LaurentSeries, g: LaurentSeries, h: LaurentSeries) -> LaurentSeries:
        pw = _PowerCache(f, g, h)
        total = None
        for e, c in self.terms():
            term = pw.monomial(e).scale(c)
            total = term if total is None else total + term
        return total

    def to_text(self) -> str:
        return "".join(f"{i} {j} {k} {c}\n" for (i, j, k), c in self.terms())

    @classmethod
    def from_text(cls, text: str) -> HomogPoly3:
        coeffs = {}
        for line in text.splitlines():
            if line.strip():
                i, j, k, c = map(int, line.split())
                coeffs[(i, j, k)] = c
        degree = sum(next(iter(coeffs)))
        return cls(degree, coeffs)

    def to_dict(self) -> dict:
        return {"degree": self.degree, "terms": [[*e, str(c)] for e, c in self.terms()]}


class _PowerCache:
    """Memoized powers and monomials in three series."""

    def __init__(self, f: LaurentSeries, g: LaurentSeries, h: LaurentSeries):
        self.base = (f, g, h)
        self.powers = ({}, {}, {})
        self.pairs = {}

    def power(self, a: int, e: int) -> LaurentSeries:
        # e >= 1; x^0 = 1 is never materialized since it would carry a finite precision
        cache = self.powers[a]
        if e not in cache:
            cache[e] = self.base[a] if e == 1 else self.power(a, e - 1) * self.base[a]
        return cache[e]

    def monomial(self, e: tuple[int, int, int]) -> LaurentSeries:
        i, j, k = e
        if (i, j) not in self.pairs:
            if i and j:
                self.pairs[(i, j)] = self.power(0, i) * self.power(1, j)
            else:
                self.pairs[(i, j)] = self.power(0, i) if i else (self.power(1, j) if j else None)
        head = self.pairs[(i, j)]
        if not k:
            if head is None:
                raise ValueError("degree-0 monomial")
            return head
        return self.power(2, k) if head is None else head * self.power(2, k)


def required_precision(N: int, m: int, d: int) -> int:
    """Number of q-coefficients used for a degree-d relation among weight-m forms on Gamma_0(N)."""
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    if m < 4 or m % 2:
        raise ValueError(f"weight must be even and >= 4, got {m}")
    sturm = -(-d * m * arith.psi(N) // 12)
    return comb(d + 2, 2) + sturm + PRECISION_MARGIN


def _check_triple(f: ModularForm, g: ModularForm, h: ModularForm) -> tuple[int, int]:
    if not (f.weight == g.weight == h.weight):
        raise ValueError(f"weights differ: {f.weight}, {g.weight}, {h.weight}")
    if not (f.level == g.level == h.level):
        raise ValueError(f"levels differ: {f.level}, {g.level}, {h.level}")
    return f.level, f.weight


def _system(pw: _PowerCache, d: int, lo: int, hi: int) -> tuple[linalg.IntMatrix, list]:
    mons = monomials(d)
    cols = []
    dens = []
    for e in mons:
        nums, den = pw.monomial(e).window(lo, hi)
        cols.append(nums)
        dens.append(den)
    common = lcm(*dens)
    if common != 1:
        # a uniform rescaling of every row leaves the kernel unchanged
        cols = [[x * (common // den) for x in col] for col, den in zip(cols, dens)]
    rows = [list(r) for r in zip(*cols) if any(r)]
    return linalg.IntMatrix(rows, len(mons)), mons


def _window(f: ModularForm, g: ModularForm, h: ModularForm, d: int, prec: int) -> tuple[int, int]:
    lo = min(0, d * min(f.series.val, g.series.val, h.series.val))
    return lo, prec


def vanishing_space(
    f: ModularForm,
    g: ModularForm,
    h: ModularForm,
    d: int,
    prec: int | None = None,
    *,
    enforce_policy: bool = True,
    _cache: _PowerCache | None = None,
) -> list[HomogPoly3]:
    """Basis of degree-d homogeneous P with P(f, g, h) = O(q^prec)."""
    N, m = _check_triple(f, g, h)
    minimum = required_precision(N, m, d) if m >= 4 else 1
    if prec is None:
        prec = minimum
    elif enforce_policy and prec < minimum:
        raise ValueError(f"precision {prec} below policy minimum {minimum} for N={N}, m={m}, d={d}")
    pw = _cache or _PowerCache(f.series, g.series, h.series)
    lo, hi = _window(f, g, h, d, prec)
    M, mons = _system(pw, d, lo, hi)
    return [
        HomogPoly3.normalized(d, dict(zip(mons, v)))
        for v in linalg.kernel_basis(M)
    ]


@dataclass
class ModelReport:
    N: int
    m: int
    labels: tuple
    found_degree: int
    predicted_degree: int
    kernel_dim: int
    equation: HomogPoly3
    residual_prec: int
    integral: bool
    family: str | None = None

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "m": self.m,
            "labels": list(self.labels),
            "family": self.family,
            "found_degree": self.found_degree,
            "predicted_degree": self.predicted_degree,
            "kernel_dim": self.kernel_dim,
            "residual_prec": self.residual_prec,
            "integral": self.integral,
            "equation": self.equation.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def degree_prediction_family(N: int, family: str) -> int:
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if family == "weight12_ab":
        return arith.psi(N)
    if family == "weight24_j":
        return arith.total_degree_formula(N)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def upper_bound_degree(N: int, m: int) -> int:
    """dim M_m(Gamma_0(N)) + g - 1, an upper bound for deg C(f, g, h)."""
    return arith.dim_spaces(N, m)[1] + arith.genus(N) - 1


def _independent(f: ModularForm, g: ModularForm, h: ModularForm) -> bool:
    prec = min(f.prec, g.prec, h.prec)
    lo = min(f.series.val, g.series.val, h.series.val, 0)
    # each row keeps its own denominator out; row scaling does not change rank
    rows = [s.window(lo, prec)[0] for s in (f.series, g.series, h.series)]
    return linalg.rank(linalg.IntMatrix(rows)) == 3


def minimal_model(
    f: ModularForm,
    g: ModularForm,
    h: ModularForm,
    d_max: int,
    *,
    family: str | None = None,
    prec: int | None = None,
) -> ModelReport:
    """Scan d = 1..d_max for the first degree carrying a relation among f, g, h.

    ``prec`` overrides the precision policy (used for synthetic inputs whose
    weight/level metadata does not describe them).
    """
    if d_max < 1:
        raise ValueError(f"d_max must be >= 1, got {d_max}")
    N, m = _check_triple(f, g, h)
    if not _independent(f, g, h):
        raise ValueError("f, g, h are linearly dependent")
    work_prec = prec if prec is not None else required_precision(N, m, d_max)
    if work_prec > min(f.prec, g.prec, h.prec):
        raise ValueError(
            f"inputs known to O(q^{min(f.prec, g.prec, h.prec)}), need O(q^{work_prec})"
        )
    if family is not None:
        predicted = degree_prediction_family(N, family)
    else:
        predicted = upper_bound_degree(N, m) if m >= 4 else -1
    pw = _PowerCache(f.series, g.series, h.series)
    labels = (f.label, g.label, h.label)
    for d in range(1, d_max + 1):
        p = prec if prec is not None else required_precision(N, m, d)
        space = vanishing_space(f, g, h, d, p, enforce_policy=prec is None, _cache=pw)
        if not space:
            continue
        eq = space[0]
        residual = eq.substitute(f.series, g.series, h.series).truncate(p)
        if not residual.is_zero:
            raise linalg.LinalgError(f"equation does not vanish to O(q^{p})")
        integral = all(s.series.is_integral() for s in (f, g, h)) and eq.is_integral()
        report = ModelReport(N, m, labels, d, predicted, len(space), eq, p, integral, family)
        if len(space) > 1:
            log.warning("kernel of dimension %d at degree %d for %s", len(space), d, labels)
            raise AnomalousKernelError(f"kernel dimension {len(space)} at degree {d}", report)
        return report
    raise ModelError(
        f"no relation up to degree {d_max} (upper bound dim M + g - 1 = {upper_bound_degree(N, m) if m >= 4 else '?'})"
    )


def weight12_ab_triple(N: int, alpha: int, beta: int, prec: int) -> tuple[ModularForm, ...]:
    d, e, dn, en = forms.weight12_basis(N, prec)
    h = ModularForm(dn.series.scale(alpha) + en.series.scale(beta), 12, N, f"{alpha}*Delta({N}z)+{beta}*E4^3({N}z)")
    return d, e, h


def weight24_j_triple(N: int, prec: int) -> tuple[ModularForm, ...]:
    """(Delta*Delta(N.), E4^3*Delta(N.), E4^3(N.)*Delta) = (1 : j : j(N.)) up to a common factor."""
    d, e, dn, en = forms.weight12_basis(N, prec)
    return (d * dn).relabel("Delta*Delta(Nz)"), (e * dn).relabel("E4^3*Delta(Nz)"), (en * d).relabel("E4^3(Nz)*Delta")


def ab_candidates(bound: int) -> Iterator[tuple[int, int]]:
    """Nonzero integer pairs in [-bound, bound]^2, by increasing max-norm."""
    for r in range(1, bound + 1):
        for a in range(-r, r + 1):
            for b in range(-r, r + 1):
                if max(abs(a), abs(b)) == r:
                    yield a, b


def _try_pair(args) -> tuple[int, int, ModelReport | None, str]:
    N, a, b = args
    psi = arith.psi(N)
    prec = required_precision(N, 12, psi)
    f, g, h = weight12_ab_triple(N, a, b, prec)
    try:
        rep = minimal_model(f, g, h, psi, family="weight12_ab")
    except AnomalousKernelError as exc:
        return a, b, exc.report, "anomalous kernel"
    except ModelError as exc:
        return a, b, None, str(exc)
    if rep.found_degree != psi:
        return a, b, rep, f"degree {rep.found_degree} != psi(N) = {psi}"
    if not rep.integral:
        return a, b, rep, "non-integral equation"
    return a, b, rep, ""


def search_ab(
    N: int,
    bound: int,
    *,
    max_hits: int | None = None,
    jobs: int = 1,
    rejected: list | None = None,
) -> list[tuple[int, int, ModelReport]]:
    """Find (alpha, beta) for which C(Delta, E4^3, alpha*Delta(N.) + beta*E4^3(N.)) has degree psi(N).

    Pairs are tried in order of increasing max(|alpha|, |beta|).  Rejected
    pairs, with the reason, are appended to ``rejected`` when it is given.
    """
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    cands = [(N, a, b) for a, b in ab_candidates(bound)]
    hits = []

    def consume(results):
        for a, b, rep, why in results:
            if why:
                log.info("N=%d (alpha, beta)=(%d, %d) rejected: %s", N, a, b, why)
                if rejected is not None:
                    rejected.append((a, b, rep, why))
                continue
            log.info("N=%d (alpha, beta)=(%d, %d) accepted, degree %d", N, a, b, rep.found_degree)
            hits.append((a, b, rep))
            if max_hits is not None and len(hits) >= max_hits:
                return True
        return False

    if jobs <= 1:
        for c in cands:
            if consume([_try_pair(c)]):
                break
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # chunks of `jobs` keep the early exit cheap while results stay in input order
            for start in range(0, len(cands), jobs):
                if consume(pool.map(_try_pair, cands[start : start + jobs])):
                    break
    return hits
