"""The classical modular polynomial Phi_N by exact linear algebra on q-expansions.

Unknowns are the coefficients c_rs = c_sr of Phi_N(x, y) = sum c_rs x^r y^s
with 0 <= r, s <= psi(N); each equation is one q-coefficient of
Phi_N(j(z), j(Nz)).  After solving, the relation is re-checked up to
exponent 2*psi(N)^2: the left side is a function on X_0(N) with at most that
many poles, so vanishing that far proves it is identically zero.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass

from . import arith, forms, linalg
from .implicit import HomogPoly3
from .qseries import LaurentSeries

log = logging.getLogger(__name__)

N_MAX_DEFAULT = 7
PRECISION_MARGIN = 16
SCHEMA_VERSION = 1


class ModPolyError(ArithmeticError):
    """The linear system did not produce a unique integral relation."""


@dataclass(frozen=True)
class BivarPoly:
    """Integer polynomial sum c_rs x^r y^s, stored sparsely."""

    coeffs: dict

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {k: v for k, v in self.coeffs.items() if v})

    def __eq__(self, other):
        return isinstance(other, BivarPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __getitem__(self, rs: tuple[int, int]) -> int:
        return self.coeffs.get(rs, 0)

    @property
    def deg_x(self) -> int:
        return max((r for r, _ in self.coeffs), default=0)

    @property
    def deg_y(self) -> int:
        return max((s for _, s in self.coeffs), default=0)

    def is_symmetric(self) -> bool:
        return all(self[(s, r)] == c for (r, s), c in self.coeffs.items())

    def reduce_mod(self, p: int) -> BivarPoly:
        return BivarPoly({k: v % p for k, v in self.coeffs.items()})

    def evaluate(self, x: LaurentSeries, y: LaurentSeries) -> LaurentSeries:
        """Horner in x over polynomials in y."""
        by_r: dict[int, dict[int, int]] = {}
        for (r, s), c in self.coeffs.items():
            by_r.setdefault(r, {})[s] = c
        ypow = {1: y}

        def y_to(s):
            if s not in ypow:
                ypow[s] = y_to(s - 1) * y
            return ypow[s]

        def inner(r):
            acc = None
            for s, c in by_r.get(r, {}).items():
                term = y_to(s).scale(c) if s else LaurentSeries.monomial(0, y.prec - y.val * self.deg_y, c)
                acc = term if acc is None else acc + term
            return acc

        acc = None
        for r in range(self.deg_x, -1, -1):
            if acc is not None:
                acc = acc * x
            a = inner(r)
            if a is not None:
                acc = a if acc is None else acc + a
        return acc

    def to_text(self) -> str:
        return "".join(f"{r} {s} {c}\n" for (r, s), c in sorted(self.coeffs.items(), reverse=True))

    @classmethod
    def from_text(cls, text: str) -> BivarPoly:
        coeffs = {}
        for line in text.splitlines():
            if line.strip():
                r, s, c = map(int, line.split())
                coeffs[(r, s)] = c
        return cls(coeffs)


def total_degree(P: BivarPoly) -> int:
    if not P.coeffs:
        raise ValueError("zero polynomial has no degree")
    return max(r + s for r, s in P.coeffs)


def diagonal_degree(P: BivarPoly) -> int:
    """Degree of P(x, x), honoring cancellation between terms of equal r+s."""
    if not P.coeffs:
        raise ValueError("zero polynomial has no degree")
    diag: dict[int, int] = {}
    for (r, s), c in P.coeffs.items():
        diag[r + s] = diag.get(r + s, 0) + c
    nonzero = [e for e, c in diag.items() if c]
    if not nonzero:
        raise ValueError("P(x, x) vanishes identically")
    return max(nonzero)


def homogenize(P: BivarPoly) -> HomogPoly3:
    """x0^D P(x1/x0, x2/x0) with D the total degree, as a normalized ternary form."""
    D = total_degree(P)
    return HomogPoly3.normalized(D, {(D - r - s, r, s): c for (r, s), c in P.coeffs.items()})


def kronecker_form(p: int) -> BivarPoly:
    """(x^p - y)(x - y^p) = x^(p+1) - x^p y^p - x y + y^(p+1)."""
    return BivarPoly({(p + 1, 0): 1, (p, p): -1, (1, 1): -1, (0, p + 1): 1})


def kronecker_check(P: BivarPoly, p: int) -> bool:
    return P.reduce_mod(p) == kronecker_form(p).reduce_mod(p)


def _unknowns(psi: int) -> list[tuple[int, int]]:
    # (r, s) with r >= s, lexicographically descending so (psi, 0) precedes (psi-1, ...)
    return [(r, s) for r in range(psi, -1, -1) for s in range(r, -1, -1)]


def certified_length(N: int) -> int:
    """Number of q-coefficients of Phi_N(j, j(N.)) that must vanish for a proof."""
    psi = arith.psi(N)
    return psi * (N + 1) + 2 * psi * psi + 1


def _system(N: int, nrows: int):
    psi = arith.psi(N)
    lo = -psi * (N + 1)
    hi = lo + nrows
    jprec = hi + psi * (N + 1)
    j = forms.j_invariant(jprec).series
    jp = {0: None, 1: j}
    for r in range(2, psi + 1):
        jp[r] = jp[r - 1] * j
    jn = {r: (jp[r].dilate(N) if r else None) for r in jp}

    def mono(r, s):
        if r == 0 and s == 0:
            return LaurentSeries.one(hi)
        if r == 0:
            return jn[s]
        if s == 0:
            return jp[r]
        return jp[r] * jn[s]

    unknowns = _unknowns(psi)
    cols = []
    for r, s in unknowns:
        ser = mono(r, s) if r == s else mono(r, s) + mono(s, r)
        nums, den = ser.window(lo, hi)
        if den != 1:
            raise ModPolyError("j has non-integral coefficients")
        cols.append(nums)
    rows = [list(x) for x in zip(*cols) if any(x)]
    return linalg.IntMatrix(rows, len(unknowns)), unknowns


def residual_is_zero(P: BivarPoly, N: int, length: int | None = None) -> bool:
    """Does Phi(j, j(N.)) vanish on its first ``length`` coefficients (default: certified)?"""
    psi = max(P.deg_x, P.deg_y)
    lo = -psi * (N + 1)
    if length is None:
        length = certified_length(N)
    target = lo + length
    jprec = target + psi * (N + 1) + 2
    j = forms.j_invariant(jprec).series
    jN = forms.j_invariant(-(-jprec // N) + 2).series.dilate(N)
    value = P.evaluate(j, jN)
    if value.prec < target:
        raise linalg.LinalgError(f"residual known only to O(q^{value.prec}), wanted {target}")
    return value.truncate(target).is_zero


def phi(N: int, n_max: int = N_MAX_DEFAULT, certify: bool = True) -> BivarPoly:
    """The classical modular polynomial Phi_N, monic in x, symmetric, integral."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if N > n_max:
        raise ValueError(f"N={N} exceeds the desk-scale limit {n_max}; raise n_max explicitly")
    psi = arith.psi(N)
    unknowns = _unknowns(psi)
    margin = PRECISION_MARGIN
    while True:
        nrows = len(unknowns) + margin
        M, unknowns = _system(N, nrows)
        log.info("Phi_%d: %d x %d system", N, M.nrows, M.ncols)
        basis = linalg.kernel_basis(M)
        if len(basis) == 1:
            break
        if len(basis) == 0:
            raise ModPolyError(f"no relation between j and j({N}z) found")
        if nrows >= certified_length(N):
            raise ModPolyError(f"kernel dimension {len(basis)} at certified precision")
        log.warning("kernel dimension %d with %d rows; widening window", len(basis), nrows)
        margin *= 2
    v = basis[0]
    lead = v[unknowns.index((psi, 0))]
    if lead not in (1, -1):
        raise ModPolyError(f"leading coefficient {lead} is not a unit after normalization")
    coeffs = {}
    for (r, s), c in zip(unknowns, v):
        coeffs[(r, s)] = c * lead
        coeffs[(s, r)] = c * lead
    P = BivarPoly(coeffs)
    if not residual_is_zero(P, N, nrows):
        raise ModPolyError("Phi_N(j, j(N.)) does not vanish on the working window")
    if certify and not residual_is_zero(P, N):
        raise ModPolyError("Phi_N(j, j(N.)) does not vanish to the certified length")
    return P


def summary(N: int, P: BivarPoly) -> dict:
    text = P.to_text()
    return {
        "schema_version": SCHEMA_VERSION,
        "N": N,
        "psi": arith.psi(N),
        "deg_x": P.deg_x,
        "deg_y": P.deg_y,
        "total_degree": total_degree(P),
        "diag_degree": diagonal_degree(P),
        "sha256": hashlib.sha256(text.encode()).hexdigest(),
    }


def checks(N: int, P: BivarPoly) -> dict[str, bool]:
    """Every structural statement about Phi_N that can be checked on the polynomial."""
    psi = arith.psi(N)
    out = {
        "symmetric": P.is_symmetric(),
        "monic_in_x": P[(psi, 0)] == 1,
        "deg_x_is_psi": P.deg_x == psi,
        "deg_y_is_psi": P.deg_y == psi,
        "total_degree_matches_formula": total_degree(P) == arith.total_degree_formula(N),
        "diag_degree_matches_formula": diagonal_degree(P) == arith.diag_degree(N),
        "total_equals_diag": total_degree(P) == diagonal_degree(P),
    }
    if len(arith.factorize(N)) == 1 and arith.factorize(N)[0][1] == 1:
        out["kronecker_congruence"] = kronecker_check(P, N)
    return out


def to_json(N: int, P: BivarPoly) -> str:
    return json.dumps(summary(N, P), sort_keys=True)
