"""Multiplicative coefficient streams: lambda_sym^m(n) and lambda(n^m) for n <= x.

Values at prime powers come from the unramified local Euler factor
prod_{j=0}^{m} (1 - e^{i(m-2j)theta} z)^{-1}: its degree-e coefficient is
the complete homogeneous symmetric function h_e of the m+1 unit-circle
eigenvalues.  Full streams are assembled by a segmented sieve over the
smallest-prime-factor decomposition, produced in fixed-size blocks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .hecke import ThetaTable, chebyshev_lambda_array, lambda_prime_power_chebyshev
from .primes import primes_up_to

DEFAULT_BLOCK_SIZE = 1 << 20
_CACHE_VALUES_LIMIT = 1 << 22  # materialize streams up to this x for reuse

_IMAG_HARD_LIMIT = 1e-6

STREAM_KINDS = ("sym", "power")


def sym_local_coefficients(theta: float, m: int, K: int) -> np.ndarray:
    """c_0..c_K of the local factor at angle theta; c_1 = sin((m+1)t)/sin(t).

    Built by multiplying m+1 truncated geometric series in complex
    arithmetic; the result is provably real, so a large imaginary residue
    signals an implementation bug and fails hard.
    """
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta={theta} outside [0, pi]")
    if m < 1:
        raise ValueError("m must be >= 1")
    if K < 1:
        raise ValueError("K must be >= 1")
    c = np.zeros(K + 1, dtype=np.complex128)
    c[0] = 1.0
    for j in range(m + 1):
        beta = cmath.exp(1j * (m - 2 * j) * theta)
        for t in range(1, K + 1):
            c[t] = c[t] + beta * c[t - 1]
    residue = float(np.abs(c.imag).max())
    if residue > _IMAG_HARD_LIMIT:
        raise ArithmeticError(
            f"imaginary residue {residue:.3e} exceeds {_IMAG_HARD_LIMIT:.0e}; "
            "local factor coefficients must be real"
        )
    return c.real.copy()


# ---------------------------------------------------------------------------
# Divisor-count bound d_{m+1}(n)

_divisor_tables: dict[int, np.ndarray] = {}


def divisor_bound_table(x: int, m: int) -> np.ndarray:
    """d_{m+1}(n) for n <= x, by m rounds of divisor convolution with 1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if x < 1:
        raise ValueError("x must be >= 1")
    cur = np.ones(x + 1, dtype=np.int64)
    cur[0] = 0
    for _ in range(m):
        nxt = np.zeros(x + 1, dtype=np.int64)
        for d in range(1, x + 1):
            nxt[d::d] += cur[d]
        cur = nxt
    return cur


def divisor_bound(n: int, m: int) -> int:
    """Number of ordered factorizations of n into m+1 natural numbers."""
    if n < 1:
        raise ValueError("n must be >= 1")
    table = _divisor_tables.get(m)
    if table is None or len(table) <= n:
        size = 1 << max(10, n.bit_length())
        table = divisor_bound_table(size, m)
        _divisor_tables[m] = table
    return int(table[n])


# ---------------------------------------------------------------------------
# Streams

@dataclass
class SymCoefficientStream:
    """Block-produced multiplicative values for n <= x.

    kind "sym":   value(p^e) = degree-e local factor coefficient at theta_p
    kind "power": value(p^e) = lambda(p^{e m}); ramified p use lambda(p)^{e m}
    """

    theta: ThetaTable
    m: int
    x: int
    kind: str
    block_size: int = DEFAULT_BLOCK_SIZE
    _tables: dict[int, np.ndarray] = field(default_factory=dict, repr=False)
    _small_primes: list[int] = field(default_factory=list, repr=False)
    _values: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in STREAM_KINDS:
            raise ValueError(f"kind must be one of {STREAM_KINDS}, got {self.kind!r}")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.x < 1:
            raise ValueError("x must be >= 1")
        if self.x > self.theta.bound:
            raise ValueError(
                f"x={self.x} exceeds the theta table bound {self.theta.bound}"
            )
        if self.block_size < 2:
            raise ValueError("block size must be >= 2")
        if self.kind == "sym" and self.theta.level != 1:
            raise ValueError(
                "symmetric-power streams are defined here only for level 1: "
                "ramified local factors at higher level are not determined "
                "by the coefficient data"
            )
        self._build_tables()

    # -- prime-power value tables -------------------------------------------
    def _prime_power_values(self, theta_p: float, e_max: int) -> np.ndarray:
        if self.kind == "sym":
            return sym_local_coefficients(theta_p, self.m, max(e_max, 1))
        out = np.empty(e_max + 1, dtype=np.float64)
        out[0] = 1.0
        for e in range(1, e_max + 1):
            out[e] = lambda_prime_power_chebyshev(theta_p, e * self.m)
        return out

    def _build_tables(self):
        small = set(int(p) for p in primes_up_to(math.isqrt(self.x)).tolist())
        ramified = [p for p in self.theta.ramified_lambda if p <= self.x]
        small.update(ramified)
        self._small_primes = sorted(small)
        prime_list = self.theta.primes
        for p in self._small_primes:
            e_max = int(math.log(self.x) / math.log(p)) if p <= self.x else 1
            while p ** (e_max + 1) <= self.x:  # guard float-log edge cases
                e_max += 1
            while e_max > 1 and p**e_max > self.x:
                e_max -= 1
            if p in self.theta.ramified_lambda:
                lam = self.theta.ramified_lambda[p]
                tab = np.array(
                    [lam ** (e * self.m) for e in range(e_max + 1)], dtype=np.float64
                )
            else:
                idx = int(np.searchsorted(prime_list, p))
                if idx >= len(prime_list) or int(prime_list[idx]) != p:
                    raise RuntimeError(f"prime {p} missing from theta table")
                tab = self._prime_power_values(float(self.theta.theta[idx]), e_max)
            self._tables[p] = tab

    # -- block production -----------------------------------------------------
    def _cofactor_values(self, rem: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.theta.primes, rem)
        ok = (idx < len(self.theta.primes)) & (
            self.theta.primes[np.minimum(idx, len(self.theta.primes) - 1)] == rem
        )
        out = np.empty(len(rem), dtype=np.float64)
        if ok.any():
            out[ok] = chebyshev_lambda_array(self.theta.theta[idx[ok]], self.m)
        for i in np.nonzero(~ok)[0]:
            p = int(rem[i])
            lam = self.theta.ramified_lambda.get(p)
            if lam is None or self.kind == "sym":
                raise RuntimeError(f"leftover factor {p} is not a tabulated prime")
            out[i] = lam**self.m
        return out

    def _compute_block(self, lo: int, hi: int) -> np.ndarray:
        """Values for n in [lo, hi); claims prime powers from the top down."""
        size = hi - lo
        value = np.ones(size, dtype=np.float64)
        rem = np.arange(lo, hi, dtype=np.int64)
        nmax = hi - 1
        for p in self._small_primes:
            if p > nmax:
                break
            tab = self._tables[p]
            e = len(tab) - 1
            while p**e > nmax and e > 1:
                e -= 1
            while e >= 1:
                q = p**e
                first = ((lo + q - 1) // q) * q
                if first <= nmax:
                    pos = np.arange(first - lo, size, q)
                    exact = rem[pos] % q == 0
                    sel = pos[exact]
                    if sel.size:
                        value[sel] *= tab[e]
                        rem[sel] //= q
                e -= 1
        leftover = np.nonzero(rem > 1)[0]
        if leftover.size:
            value[leftover] *= self._cofactor_values(rem[leftover])
        return value

    def blocks(self) -> Iterator[tuple[int, np.ndarray]]:
        """Yield (start_n, values) covering n = 1..x in order."""
        if self._values is not None:
            for lo in range(1, self.x + 1, self.block_size):
                hi = min(lo + self.block_size, self.x + 1)
                yield lo, self._values[lo - 1 : hi - 1]
            return
        cache = self.x <= _CACHE_VALUES_LIMIT
        parts = [] if cache else None
        for lo in range(1, self.x + 1, self.block_size):
            hi = min(lo + self.block_size, self.x + 1)
            vals = self._compute_block(lo, hi)
            if parts is not None:
                parts.append(vals)
            yield lo, vals
        if parts is not None:
            self._values = np.concatenate(parts)

    def values_array(self) -> np.ndarray:
        """Materialized values, index i holds value(i+1)."""
        if self._values is None:
            parts = [vals for _, vals in self.blocks()]
            if self._values is None:
                self._values = np.concatenate(parts)
        return self._values

    def value_at(self, n: int) -> float:
        if not 1 <= n <= self.x:
            raise IndexError(f"n={n} outside 1..{self.x}")
        return float(self.values_array()[n - 1])


def assemble_multiplicative(
    theta_table: ThetaTable,
    m: int,
    x: int,
    kind: str,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> SymCoefficientStream:
    """Stream of multiplicative values over n <= x for the given kind."""
    return SymCoefficientStream(theta=theta_table, m=m, x=x, kind=kind, block_size=block_size)
