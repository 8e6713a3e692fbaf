"""Truncated Laurent series in q with exact rational coefficients.

A series is stored as a list of integer numerators sharing one positive
denominator, so the common integral case costs nothing beyond Python ints.
``val`` is the exponent of the first stored coefficient and ``prec`` the
first exponent whose coefficient is *unknown*: a series is exact modulo
``O(q^prec)``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

# product length at which the Kronecker-substitution multiply takes over
KRONECKER_THRESHOLD = 64


class PrecisionError(IndexError):
    """A coefficient beyond the known precision was requested."""


def _content(nums: Iterable[int]) -> int:
    g = 0
    for c in nums:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _mul_naive(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * n
    for i, ai in enumerate(a[:n]):
        if ai:
            for j, bj in enumerate(b[: n - i]):
                out[i + j] += ai * bj
    return out


def _pack(nums: Sequence[int], width: int) -> int:
    # non-negative coefficients only, each < 2**(8*width)
    return int.from_bytes(b"".join(c.to_bytes(width, "little") for c in nums), "little")


def _unpack(value: int, width: int, n: int) -> list[int]:
    raw = value.to_bytes((value.bit_length() + 7) // 8, "little")[: width * n]
    return [int.from_bytes(raw[i * width : (i + 1) * width], "little") for i in range(n)]


def _mul_kronecker(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    a = list(a[:n])
    b = list(b[:n])
    bits = max(abs(c).bit_length() for c in a) + max(abs(c).bit_length() for c in b)
    bits += min(len(a), len(b)).bit_length() + 2
    width = (bits + 7) // 8

    def split(xs):
        return [c if c > 0 else 0 for c in xs], [-c if c < 0 else 0 for c in xs]

    ap, am = split(a)
    bp, bm = split(b)
    pack = lambda xs: _pack(xs, width)  # noqa: E731
    Ap, Am, Bp, Bm = pack(ap), pack(am), pack(bp), pack(bm)
    # (Ap - Am)(Bp - Bm) = 2(ApBp + AmBm) - (Ap + Am)(Bp + Bm) with three products
    same = _unpack(Ap * Bp, width, n), _unpack(Am * Bm, width, n)
    cross = _unpack((Ap + Am) * (Bp + Bm), width, n)
    return [2 * (x + y) - z for x, y, z in zip(same[0], same[1], cross)]


def mul_truncated(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First ``n`` coefficients of the product of two integer coefficient lists."""
    if n <= 0 or not a or not b:
        return [0] * max(n, 0)
    if min(len(a), len(b), n) < KRONECKER_THRESHOLD:
        out = _mul_naive(a, b, n)
    else:
        out = _mul_kronecker(a, b, n)
    if len(out) < n:
        out.extend([0] * (n - len(out)))
    return out


class LaurentSeries:
    """``sum_{e >= val} c_e q^e + O(q^prec)`` with rational ``c_e``.

    Instances are immutable.  The leading stored numerator is nonzero unless the
    series is zero to its precision, in which case nothing is stored and
    ``val == prec``.
    """

    __slots__ = ("_nums", "_den", "val", "prec")

    def __init__(self, coeffs: Sequence, val: int = 0, prec: int | None = None):
        if prec is None:
            prec = val + len(coeffs)
        fr = [Fraction(c) for c in coeffs[: max(prec - val, 0)]]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        nums = [c.numerator * (den // c.denominator) for c in fr]
        self._set(nums, den, val, prec)

    def _set(self, nums: list[int], den: int, val: int, prec: int) -> None:
        # canonical form: leading numerator nonzero, padded to prec, reduced den
        start = 0
        while start < len(nums) and nums[start] == 0:
            start += 1
        val += start
        if val >= prec:
            nums, den, val = [], 1, prec
        else:
            nums = nums[start : start + prec - val]
            nums.extend([0] * (prec - val - len(nums)))
            if den != 1:
                g = gcd(_content(nums), den)
                if g > 1:
                    nums = [c // g for c in nums]
                    den //= g
            if den < 0:
                nums, den = [-c for c in nums], -den
        object.__setattr__(self, "_nums", nums)
        object.__setattr__(self, "_den", den)
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    @classmethod
    def _raw(cls, nums: list[int], den: int, val: int, prec: int) -> LaurentSeries:
        obj = cls.__new__(cls)
        obj._set(nums, den, val, prec)
        return obj

    @classmethod
    def from_ints(cls, nums: Sequence[int], val: int = 0, prec: int | None = None, den: int = 1):
        if prec is None:
            prec = val + len(nums)
        return cls._raw(list(nums), den, val, prec)

    @classmethod
    def zero(cls, prec: int) -> LaurentSeries:
        return cls._raw([], 1, prec, prec)

    @classmethod
    def one(cls, prec: int) -> LaurentSeries:
        return cls.monomial(0, prec)

    @classmethod
    def monomial(cls, e: int, prec: int, coeff=1) -> LaurentSeries:
        c = Fraction(coeff)
        return cls._raw([c.numerator], c.denominator, e, prec)

    # -- inspection -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True when the series vanishes to its precision."""
        return not self._nums

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def numerators(self) -> list[int]:
        return list(self._nums)

    @property
    def coeffs(self) -> list[Fraction]:
        return [Fraction(c, self._den) for c in self._nums]

    def is_integral(self) -> bool:
        return self._den == 1

    def __getitem__(self, e: int) -> Fraction:
        if e >= self.prec:
            raise PrecisionError(f"coefficient of q^{e} unknown (series is O(q^{self.prec}))")
        if e < self.val:
            return Fraction(0)
        return Fraction(self._nums[e - self.val], self._den)

    def window(self, start: int, stop: int) -> tuple[list[int], int]:
        """Numerators of the coefficients of q^start .. q^(stop-1), with the denominator."""
        if stop > self.prec:
            raise PrecisionError(f"window up to q^{stop - 1} exceeds O(q^{self.prec})")
        out = []
        for e in range(start, stop):
            i = e - self.val
            out.append(self._nums[i] if 0 <= i < len(self._nums) else 0)
        return out, self._den

    def leading_coefficient(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero series has no leading coefficient")
        return Fraction(self._nums[0], self._den)

    def truncate(self, prec: int) -> LaurentSeries:
        if prec > self.prec:
            raise PrecisionError(f"cannot raise precision from {self.prec} to {prec}")
        return LaurentSeries._raw(self._nums[: max(prec - self.val, 0)], self._den, min(self.val, prec), prec)

    # -- ring operations ---------------------------------------------------

    def _aligned(self, other: LaurentSeries, prec: int, val: int) -> tuple[list[int], list[int], int]:
        den = self._den * other._den // gcd(self._den, other._den)
        sa, sb = den // self._den, den // other._den
        n = prec - val
        a = [0] * n
        b = [0] * n
        for i, c in enumerate(self._nums):
            j = self.val + i - val
            if j >= n:
                break
            a[j] = c * sa
        for i, c in enumerate(other._nums):
            j = other.val + i - val
            if j >= n:
                break
            b[j] = c * sb
        return a, b, den

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.monomial(0, self.prec, other)
        prec = min(self.prec, other.prec)
        val = min(self.val, other.val, prec)
        a, b, den = self._aligned(other, prec, val)
        return LaurentSeries._raw([x + y for x, y in zip(a, b)], den, val, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries._raw([-c for c in self._nums], self._den, self.val, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> LaurentSeries:
        c = Fraction(c)
        if c == 0:
            return LaurentSeries.zero(self.prec)
        return LaurentSeries._raw(
            [x * c.numerator for x in self._nums], self._den * c.denominator, self.val, self.prec
        )

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        if self.is_zero or other.is_zero:
            return LaurentSeries.zero(prec)
        nums = mul_truncated(self._nums, other._nums, prec - val)
        return LaurentSeries._raw(nums, self._den * other._den, val, prec)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int) -> LaurentSeries:
        if not isinstance(e, int) or e < 0:
            raise ValueError(f"exponent must be a non-negative int, got {e!r}")
        if e == 0:
            if self.is_zero:
                raise ValueError("0**0 of a series with no known leading term")
            return LaurentSeries.one(self.prec - self.val)
        result = None
        base = self
        while True:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if not e:
                return result
            base = base * base

    def inverse(self) -> LaurentSeries:
        if self.is_zero:
            raise ZeroDivisionError("series is zero to its precision")
        n = self.prec - self.val
        b = self._nums
        b0 = b[0]
        if b0 in (1, -1):
            inv = [b0]
            for k in range(1, n):
                s = 0
                for i in range(1, min(k, len(b) - 1) + 1):
                    s += b[i] * inv[k - i]
                inv.append(-s * b0)
            # inv is the inverse of b (numerators); account for the denominator
            return LaurentSeries._raw(inv, 1, -self.val, -self.val + n).scale(self._den)
        c = [Fraction(x, self._den) for x in b]
        inv = [1 / c[0]]
        for k in range(1, n):
            s = sum(c[i] * inv[k - i] for i in range(1, min(k, len(c) - 1) + 1))
            inv.append(-s * inv[0])
        return LaurentSeries(inv, -self.val, -self.val + n)

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            other = Fraction(other)
            if other == 0:
                raise ZeroDivisionError("division by zero scalar")
            return self.scale(1 / other)
        if other.is_zero:
            raise ZeroDivisionError("division by a series that is zero to its precision")
        # relative precision of the quotient is min of the operands' (mul rule)
        return self * other.inverse()

    def dilate(self, N: int) -> LaurentSeries:
        """Substitute q -> q^N."""
        if not isinstance(N, int) or N < 1:
            raise ValueError(f"dilation factor must be a positive int, got {N!r}")
        if N == 1:
            return self
        prec = N * (self.prec - 1) + 1
        if self.is_zero:
            return LaurentSeries.zero(prec)
        nums = [0] * (N * (len(self._nums) - 1) + 1)
        nums[::N] = self._nums
        return LaurentSeries._raw(nums, self._den, N * self.val, prec)

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.val == other.val
            and self.prec == other.prec
            and self._den == other._den
            and self._nums == other._nums
        )

    def __hash__(self):
        return hash((self.val, self.prec, self._den, tuple(self._nums)))

    def agrees_with(self, other: LaurentSeries) -> bool:
        """Equality up to the smaller of the two precisions."""
        return (self - other).is_zero

    def __repr__(self):
        terms = []
        for i, c in enumerate(self._nums[:8]):
            if c:
                terms.append(f"{Fraction(c, self._den)}*q^{self.val + i}")
        more = " + ..." if len(self._nums) > 8 else ""
        body = " + ".join(terms) or "0"
        return f"{body}{more} + O(q^{self.prec})"

    def to_dict(self) -> dict:
        return {
            "val": self.val,
            "prec": self.prec,
            "coeffs": [f"{q.numerator}/{q.denominator}" for q in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> LaurentSeries:
        return cls([Fraction(s) for s in data["coeffs"]], data["val"], data["prec"])

    @classmethod
    def from_json(cls, text: str) -> LaurentSeries:
        return cls.from_dict(json.loads(text))
