"""Exact integer power-series arithmetic for truncated q-expansions.

Dense series carry every coefficient up to a precision X; sparse series
carry the handful of nonzero terms of the two product identities used to
seed eta powers:

    prod (1-q^n)   = sum_{j in Z} (-1)^j q^{j(3j-1)/2}        (r=1)
    prod (1-q^n)^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2}    (r=3)

All arithmetic is exact; the fast multiplication path lives in `ntt` and
is cross-checked against the schoolbook path by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .ntt import _INT64_SAFE, convolve_exact

_SCHOOLBOOK_CUTOFF = 32


class IntSeries:
    """Dense truncated series with exact integer coefficients, index = exponent."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int]):
        if len(coeffs) < 1:
            raise ValueError("a series needs at least the constant coefficient")
        self.coeffs = [int(c) for c in coeffs]

    @property
    def precision(self) -> int:
        return len(self.coeffs) - 1

    def l1(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def linf(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    @classmethod
    def one(cls, precision: int) -> "IntSeries":
        return cls([1] + [0] * precision)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntSeries) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.precision >= 6 else ""
        return f"IntSeries(X={self.precision}, [{head}{tail}])"


@dataclass(frozen=True)
class SparseSeries:
    """Nonzero (exponent, coefficient) terms; exponents strictly increasing."""

    exponents: tuple[int, ...]
    coeffs: tuple[int, ...]
    precision: int

    def __post_init__(self):
        if len(self.exponents) != len(self.coeffs):
            raise ValueError("exponent/coefficient length mismatch")
        if any(c == 0 for c in self.coeffs):
            raise ValueError("zero coefficients must not be stored")
        if any(b <= a for a, b in zip(self.exponents, self.exponents[1:])):
            raise ValueError("exponents must be strictly increasing")
        if self.exponents and (self.exponents[0] < 0 or self.exponents[-1] > self.precision):
            raise ValueError("exponents must lie in [0, precision]")

    def terms(self) -> Iterator[tuple[int, int]]:
        return zip(self.exponents, self.coeffs)

    def l1(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def linf(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)


def eta_power_series(r: int, X: int) -> SparseSeries:
    """Sparse expansion of prod_{n>=1} (1-q^n)^r truncated at q^X, r in {1, 3}.

    The fractional q-prefactor of the eta function is not included here;
    callers track it as a separate integer exponent shift.
    """
    if r not in (1, 3):
        raise ValueError(f"only exponents 1 and 3 have sparse product identities, got r={r}")
    if X < 1:
        raise ValueError("precision must be >= 1")
    terms: list[tuple[int, int]] = []
    if r == 1:
        j = 0
        while True:
            g1 = j * (3 * j - 1) // 2
            g2 = j * (3 * j + 1) // 2
            c = 1 if j % 2 == 0 else -1
            added = False
            if g1 <= X:
                terms.append((g1, c))
                added = True
            if j > 0 and g2 <= X:
                terms.append((g2, c))
                added = True
            if not added:
                break
            j += 1
    else:
        k = 0
        while True:
            e = k * (k + 1) // 2
            if e > X:
                break
            terms.append((e, (2 * k + 1) * (1 if k % 2 == 0 else -1)))
            k += 1
    terms.sort()
    return SparseSeries(
        exponents=tuple(e for e, _ in terms),
        coeffs=tuple(c for _, c in terms),
        precision=X,
    )


def dilate(s: SparseSeries, d: int, precision: int | None = None) -> SparseSeries:
    """Substitute q -> q^d.  The default precision keeps every dilated term."""
    if d < 1:
        raise ValueError("dilation factor must be >= 1")
    prec = s.precision * d if precision is None else precision
    keep = [(e * d, c) for e, c in s.terms() if e * d <= prec]
    return SparseSeries(
        exponents=tuple(e for e, _ in keep),
        coeffs=tuple(c for _, c in keep),
        precision=prec,
    )


def densify(s: SparseSeries, precision: int | None = None) -> IntSeries:
    prec = s.precision if precision is None else precision
    out = [0] * (prec + 1)
    for e, c in s.terms():
        if e <= prec:
            out[e] = c
    return IntSeries(out)


def _product_bound(l1a: int, linfa: int, l1b: int, linfb: int) -> int:
    return min(l1a * linfb, linfa * l1b)


def mul_schoolbook(a: IntSeries, b: IntSeries) -> IntSeries:
    """Reference truncated Cauchy product, O(X^2) exact integer arithmetic."""
    X = min(a.precision, b.precision)
    ca, cb = a.coeffs, b.coeffs
    out = [0] * (X + 1)
    for i in range(X + 1):
        ai = ca[i]
        if ai:
            for j in range(X - i + 1):
                if cb[j]:
                    out[i + j] += ai * cb[j]
    return IntSeries(out)


def mul(a: IntSeries, b: IntSeries, method: str = "auto") -> IntSeries:
    """Exact truncated product; precision of the result is min(Xa, Xb).

    method "auto" routes through the NTT/CRT fast path except for tiny
    operands; "schoolbook" forces the reference path, "ntt" forces the
    fast path.
    """
    if method not in ("auto", "ntt", "schoolbook"):
        raise ValueError(f"unknown multiplication method {method!r}")
    X = min(a.precision, b.precision)
    if method == "schoolbook" or (method == "auto" and X <= _SCHOOLBOOK_CUTOFF):
        if a.precision == b.precision == X:
            return mul_schoolbook(a, b)
        return mul_schoolbook(IntSeries(a.coeffs[: X + 1]), IntSeries(b.coeffs[: X + 1]))
    ca = a.coeffs[: X + 1]
    cb = b.coeffs[: X + 1]
    l1a = sum(abs(c) for c in ca)
    l1b = sum(abs(c) for c in cb)
    linfa = max((abs(c) for c in ca), default=0)
    linfb = max((abs(c) for c in cb), default=0)
    bound = _product_bound(l1a, linfa, l1b, linfb)
    if bound == 0:
        return IntSeries([0] * (X + 1))
    return IntSeries(convolve_exact(ca, cb, X + 1, bound))


def mul_sparse(a: IntSeries, b: SparseSeries) -> IntSeries:
    """Exact product of a dense series with a sparse one, O(X * #terms)."""
    X = min(a.precision, b.precision)
    bound = _product_bound(sum(abs(c) for c in a.coeffs[: X + 1]), a.linf(), b.l1(), b.linf())
    if bound < _INT64_SAFE and a.linf() < _INT64_SAFE:
        arr = np.array(a.coeffs[: X + 1], dtype=np.int64)
        out = np.zeros(X + 1, dtype=np.int64)
        for e, c in b.terms():
            if e > X:
                break
            out[e:] += c * arr[: X + 1 - e]
        return IntSeries(out.tolist())
    ca = a.coeffs
    out = [0] * (X + 1)
    for e, c in b.terms():
        if e > X:
            break
        for i in range(X + 1 - e):
            if ca[i]:
                out[e + i] += c * ca[i]
    return IntSeries(out)


def sparse_product_dense(a: SparseSeries, b: SparseSeries, precision: int) -> IntSeries:
    """Dense truncated product of two sparse series (term-pair accumulation)."""
    bound = _product_bound(a.l1(), a.linf(), b.l1(), b.linf())
    ea = np.array(a.exponents, dtype=np.int64)
    caf = np.array(a.coeffs, dtype=np.int64)
    if bound < _INT64_SAFE:
        out = np.zeros(precision + 1, dtype=np.int64)
        for e, c in b.terms():
            if e > precision:
                break
            m = ea <= precision - e
            np.add.at(out, ea[m] + e, caf[m] * c)
        return IntSeries(out.tolist())
    out_py = [0] * (precision + 1)
    for e, c in b.terms():
        for e2, c2 in a.terms():
            if e + e2 > precision:
                break
            out_py[e + e2] += c * c2
    return IntSeries(out_py)


def sparse_power_dense(base: SparseSeries, exponent: int, precision: int) -> IntSeries:
    """base**exponent as a dense series, via square-and-multiply.

    The first squaring stays in sparse-sparse form (cheap term-pair
    accumulation); later steps use the dense fast path.
    """
    if exponent < 1:
        raise ValueError("exponent must be >= 1")
    if exponent == 1:
        return densify(base, precision)
    cur = sparse_product_dense(base, base, precision)
    result = densify(base, precision) if exponent & 1 else None
    e = exponent >> 1
    while True:
        if e & 1:
            result = cur if result is None else mul(result, cur)
        e >>= 1
        if not e:
            break
        cur = mul(cur, cur)
    assert result is not None
    return result
