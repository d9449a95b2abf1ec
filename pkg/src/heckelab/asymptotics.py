"""Partial sums of |value(n)|, the logarithmic saving exponent, and the
absolute-convergence probe.

The partial sums grow like const * x * (log x)^(-delta_m) with

    delta_m = 1 - (4(m+1)) / (pi m (m+2)) * cot(pi / (2(m+1))),

so the ratio A(x) (log x)^{delta_m} / x should flatten; the constant is
reported from the trend, never asserted.  Dyadic block sums of
|value(n)| n^{-sigma} expose the convergence abscissa: their ratio tracks
2^{1-sigma} up to the slowly varying log factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sympower import SymCoefficientStream


@dataclass(frozen=True)
class AsymptoticsReport:
    form_name: str
    m: int
    kind: str
    delta: float
    checkpoints: tuple[tuple[int, float, float], ...]  # (x, A(x), R(x))
    block_increments: tuple[tuple[float, int, float], ...] = field(default=())

    def ratio_at(self, x: int) -> float:
        for cx, _, r in self.checkpoints:
            if cx == x:
                return r
        raise KeyError(f"no checkpoint at x={x}")

    def sum_at(self, x: int) -> float:
        for cx, a, _ in self.checkpoints:
            if cx == x:
                return a
        raise KeyError(f"no checkpoint at x={x}")


def delta_m(m: int) -> float:
    """Logarithmic saving exponent; lies in (0, 1) for every m >= 1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    half_angle = math.pi / (2 * (m + 1))
    return 1 - (4 * (m + 1)) / (math.pi * m * (m + 2)) * (1 / math.tan(half_angle))


def partial_sums(stream: SymCoefficientStream, checkpoints: list[int]) -> AsymptoticsReport:
    """A(x) = sum_{n<=x} |value(n)| and R(x) = A(x) (log x)^delta / x."""
    cps = sorted(set(int(c) for c in checkpoints))
    if not cps:
        raise ValueError("need at least one checkpoint")
    if cps[0] < 1 or cps[-1] > stream.x:
        raise ValueError(f"checkpoints must lie in 1..{stream.x}")
    d = delta_m(stream.m)
    out = []
    running = 0.0
    it = iter(cps)
    target = next(it)
    done = False
    for lo, vals in stream.blocks():
        if done:
            break
        hi = lo + len(vals)
        absv = np.abs(vals)
        csum = np.cumsum(absv)
        while target is not None and lo <= target < hi:
            a_val = running + float(csum[target - lo])
            r_val = a_val * math.log(target) ** d / target if target > 1 else a_val
            out.append((target, a_val, r_val))
            target = next(it, None)
            if target is None:
                done = True
                break
        running += float(csum[-1])
    return AsymptoticsReport(
        form_name=stream.theta.form_name,
        m=stream.m,
        kind=stream.kind,
        delta=d,
        checkpoints=tuple(out),
    )


def partial_summation_check(
    stream: SymCoefficientStream, beta: float, N: int
) -> tuple[float, float, float]:
    """Abel-summation identity on the step function A(u).

    lhs = sum_{n<=N} |value(n)| n^-beta
    rhs = A(N) N^-beta + sum_{n<N} A(n) (n^-beta - (n+1)^-beta)

    The integral against u^(-beta-1) is evaluated exactly on each step
    [n, n+1), so the residual is pure float roundoff.
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    if not 1 <= N <= stream.x:
        raise ValueError(f"N must lie in 1..{stream.x}")
    lhs = 0.0
    integral = 0.0
    running = 0.0
    a_at_n = 0.0
    for lo, vals in stream.blocks():
        if lo > N:
            break
        take = min(len(vals), N - lo + 1)
        absv = np.abs(vals[:take])
        n = np.arange(lo, lo + take, dtype=np.float64)
        lhs += float(np.dot(absv, n**-beta))
        a_run = running + np.cumsum(absv)
        # steps n -> n+1 contribute A(n) (n^-beta - (n+1)^-beta) for n < N
        upper = np.minimum(lo + take - 1, N - 1) - lo + 1
        if upper > 0:
            nn = n[:upper]
            integral += float(np.dot(a_run[:upper], nn**-beta - (nn + 1) ** -beta))
        running = float(a_run[-1])
        a_at_n = running if lo + take - 1 == N else a_at_n
    rhs = a_at_n * N**-beta + integral
    residual = abs(lhs - rhs) / lhs if lhs != 0 else 0.0
    return lhs, rhs, residual


def abscissa_probe(
    stream: SymCoefficientStream, sigma: float, j_range: range | list[int]
) -> list[tuple[int, float]]:
    """Dyadic block sums T_j = sum_{2^j < n <= 2^(j+1)} |value(n)| n^-sigma."""
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    js = sorted(set(int(j) for j in j_range))
    if not js:
        raise ValueError("empty block range")
    if (1 << (js[-1] + 1)) > stream.x:
        raise ValueError(
            f"block j={js[-1]} needs n up to 2^{js[-1] + 1} > strea" f"m bound {stream.x}"
        )
    sums = {j: 0.0 for j in js}
    lo_n = (1 << js[0]) + 1
    hi_n = 1 << (js[-1] + 1)
    for lo, vals in stream.blocks():
        hi = lo + len(vals)
        if hi <= lo_n or lo > hi_n:
            continue
        n = np.arange(lo, hi, dtype=np.int64)
        inside = (n >= lo_n) & (n <= hi_n)
        if not inside.any():
            continue
        n_in = n[inside]
        w = np.abs(vals[inside]) * n_in.astype(np.float64) ** -sigma
        # n in (2^j, 2^(j+1)]  <=>  j = bit_length(n-1) - 1
        js_of_n = np.frexp((n_in - 1).astype(np.float64))[1] - 1
        for j in np.unique(js_of_n):
            sums[int(j)] += float(w[js_of_n == j].sum())
    return [(j, sums[j]) for j in js]


def block_ratios(tjs: list[tuple[int, float]]) -> list[float]:
    return [b / a for (_, a), (_, b) in zip(tjs, tjs[1:])]


def geometric_mean(values: list[float]) -> float:
    if not values:
        raise ValueError("empty sequence")
    return math.exp(sum(math.log(v) for v in values) / len(values))
