"""Prime-power eigenvalues: exact integer recursion and angle-based evaluation.

At an unramified prime the normalized coefficient satisfies
lambda(p) = 2 cos(theta_p) with theta_p in [0, pi], and
lambda(p^m) = sin((m+1) theta_p) / sin(theta_p), the degree-m Chebyshev-U
value at cos(theta_p).  Sign questions are always settled on the exact
integer side; the float side exists for distribution and stream work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .forms import CoefficientSeries
from .primes import primes_up_to

_SIN_EPS = 1e-6  # below this, the sine quotient is replaced by the U recurrence


@dataclass(frozen=True)
class PrimePowerValue:
    p: int
    m: int
    a_value: int
    lambda_value: float
    sign: int


@dataclass
class ThetaTable:
    """Angles theta_p for unramified primes p <= bound, plus ramified lambdas."""

    form_name: str
    weight: int
    level: int
    cm: bool
    bound: int
    primes: np.ndarray
    lam: np.ndarray
    theta: np.ndarray
    clamped: int
    ramified_lambda: dict[int, float]

    def __len__(self) -> int:
        return len(self.primes)

    def __repr__(self) -> str:
        return (
            f"ThetaTable({self.form_name}, bound={self.bound}, "
            f"primes={len(self.primes)}, clamped={self.clamped})"
        )


def theta_table(series: CoefficientSeries, bound: int | None = None) -> ThetaTable:
    """theta_p = arccos(clamp(lambda(p)/2)) for unramified p <= bound.

    Clamping events are counted: they can only come from float rounding,
    since the exact Deligne scan guards |a(p)| <= 2 p^((k-1)/2).
    """
    form = series.form
    top = series.X if bound is None else min(bound, series.X)
    ps = primes_up_to(top)
    N = form.level
    if N > 1:
        ps = ps[np.array([N % int(p) != 0 for p in ps], dtype=bool)]
    a_vals = np.array([float(series.a[p]) for p in ps.tolist()], dtype=np.float64)
    lam = a_vals / np.power(ps.astype(np.float64), (form.weight - 1) / 2)
    half = lam / 2.0
    clamped = int(np.count_nonzero(np.abs(half) > 1.0))
    theta = np.arccos(np.clip(half, -1.0, 1.0))
    ram = {}
    for p in series.form.ramified_primes():
        if p <= series.X:
            ram[p] = float(series.a[p]) / math.pow(p, (form.weight - 1) / 2)
    return ThetaTable(
        form_name=form.name,
        weight=form.weight,
        level=form.level,
        cm=form.cm,
        bound=top,
        primes=ps,
        lam=lam,
        theta=theta,
        clamped=clamped,
        ramified_lambda=ram,
    )


def _lambda_float(a: int, p: int, weight: int, m: int) -> float:
    if a == 0:
        return 0.0
    lg = math.log(abs(a)) - (m * (weight - 1) / 2) * math.log(p)
    return math.copysign(math.exp(lg), a)


def lambda_prime_power_exact(series: CoefficientSeries, p: int, m: int) -> PrimePowerValue:
    """Exact a(p^m) by the three-term recursion (ramified: a(p)^m)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 1 <= p <= series.X:
        raise IndexError(f"p={p} outside expanded range 1..{series.X}")
    k, N = series.form.weight, series.form.level
    ap = series.a[p]
    if N % p == 0:
        a = ap**m
    else:
        pk = p ** (k - 1)
        prev, cur = 1, ap
        for _ in range(m - 1):
            prev, cur = cur, ap * cur - pk * prev
        a = cur
    return PrimePowerValue(
        p=p,
        m=m,
        a_value=a,
        lambda_value=_lambda_float(a, p, k, m),
        sign=(a > 0) - (a < 0),
    )


def sign_prime_power(series: CoefficientSeries, p: int, m: int) -> int:
    """Exact sign of a(p^m) without the float scaling."""
    k, N = series.form.weight, series.form.level
    ap = series.a[p]
    if N % p == 0:
        v = ap**m
    elif m == 1:
        v = ap
    else:
        pk = p ** (k - 1)
        prev, cur = 1, ap
        for _ in range(m - 1):
            prev, cur = cur, ap * cur - pk * prev
        v = cur
    return (v > 0) - (v < 0)


def lambda_prime_power_chebyshev(theta: float, m: int) -> float:
    """sin((m+1) theta)/sin(theta), with the stable recurrence near 0 and pi.

    The limiting values are m+1 at theta=0 and (-1)^m (m+1) at theta=pi.
    """
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta={theta} outside [0, pi]")
    if m < 1:
        raise ValueError("m must be >= 1")
    s = math.sin(theta)
    if s >= _SIN_EPS:
        return math.sin((m + 1) * theta) / s
    x = math.cos(theta)
    u_prev, u = 1.0, 2.0 * x
    for _ in range(m - 1):
        u_prev, u = u, 2.0 * x * u - u_prev
    return u


def chebyshev_lambda_array(theta: np.ndarray, m: int) -> np.ndarray:
    """Vectorized lambda_prime_power_chebyshev for stream assembly."""
    if m < 1:
        raise ValueError("m must be >= 1")
    theta = np.asarray(theta, dtype=np.float64)
    s = np.sin(theta)
    out = np.empty_like(theta)
    good = s >= _SIN_EPS
    out[good] = np.sin((m + 1) * theta[good]) / s[good]
    rest = ~good
    if rest.any():
        x = np.cos(theta[rest])
        u_prev = np.ones_like(x)
        u = 2.0 * x
        for _ in range(m - 1):
            u_prev, u = u, 2.0 * x * u - u_prev
        out[rest] = u
    return out
