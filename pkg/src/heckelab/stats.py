"""Sign densities and angle-distribution tests.

For a non-CM form the angles follow the semicircle-type density
(2/pi) sin^2(theta) on [0, pi]; for a CM form they follow the mixture of
a uniform half on [0, pi] and a point mass 1/2 at pi/2.  The sign of
lambda(p^m) is the sign of sin((m+1) theta_p), so the limit frequencies
are measures of explicit interval unions, with closed forms:

    non-CM, m even:  d+ = (m+2)/(2(m+1)) - tan(pi/(m+1))/(2 pi)
    CM, m = 0 mod 4: d+ = (m+2)/(4(m+1)) + 1/2   (atom contributes +1)
    CM, m = 2 mod 4: d- = m/(4(m+1)) + 1/2       (atom contributes -1)

Empirical counting always uses exact integer signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .forms import CoefficientSeries
from .hecke import ThetaTable
from .primes import primes_up_to

REFERENCES = ("sato_tate", "deuring_mixture")
_HALF_PI = math.pi / 2


@dataclass(frozen=True)
class SignDensityReport:
    form_name: str
    m: int
    x_bound: int
    counts: tuple[int, int, int]  # positive, negative, zero
    frequencies: tuple[float, float, float]
    predicted: tuple[float, float, float]
    abs_errors: tuple[float, float, float]

    @property
    def n_unramified(self) -> int:
        return sum(self.counts)

    @property
    def max_abs_error(self) -> float:
        return max(self.abs_errors)


@dataclass(frozen=True)
class DistributionTestReport:
    form_name: str
    x_bound: int
    reference: str
    sample_size: int
    ks_statistic: float


def predicted_density(m: int, cm: bool) -> tuple[float, float, float]:
    """Limit frequencies (positive, negative, zero) of the signs of lambda(p^m)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not cm:
        if m % 2 == 1:
            return (0.5, 0.5, 0.0)
        t = math.tan(math.pi / (m + 1)) / (2 * math.pi)
        return ((m + 2) / (2 * (m + 1)) - t, m / (2 * (m + 1)) + t, 0.0)
    if m % 2 == 1:
        return (0.25, 0.25, 0.5)
    if m % 4 == 0:
        return ((m + 2) / (4 * (m + 1)) + 0.5, m / (4 * (m + 1)), 0.0)
    return ((m + 2) / (4 * (m + 1)), m / (4 * (m + 1)) + 0.5, 0.0)


def empirical_sign_density(
    series: CoefficientSeries, m: int, X: int | None = None
) -> SignDensityReport:
    """Exact-integer sign counts of a(p^m) over unramified p <= X."""
    if m < 1:
        raise ValueError("m must be >= 1")
    top = series.X if X is None else X
    if top > series.X:
        raise ValueError(f"X={top} exceeds expanded precision {series.X}")
    k, N = series.form.weight, series.form.level
    a = series.a
    pos = neg = zero = 0
    for p in primes_up_to(top).tolist():
        p = int(p)
        if N % p == 0:
            continue
        ap = a[p]
        if m == 1:
            v = ap
        else:
            pk = p ** (k - 1)
            prev, cur = 1, ap
            for _ in range(m - 1):
                prev, cur = cur, ap * cur - pk * prev
            v = cur
        if v > 0:
            pos += 1
        elif v < 0:
            neg += 1
        else:
            zero += 1
    total = pos + neg + zero
    freqs = (pos / total, neg / total, zero / total)
    pred = predicted_density(m, series.form.cm)
    errs = tuple(abs(f - q) for f, q in zip(freqs, pred))
    return SignDensityReport(
        form_name=series.form.name,
        m=m,
        x_bound=top,
        counts=(pos, neg, zero),
        frequencies=freqs,
        predicted=pred,
        abs_errors=errs,  # type: ignore[arg-type]
    )


# ---------------------------------------------------------------------------
# Reference distributions

def sato_tate_cdf(theta: float) -> float:
    """F(theta) = theta/pi - sin(2 theta)/(2 pi) on [0, pi]."""
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta={theta} outside [0, pi]")
    return theta / math.pi - math.sin(2 * theta) / (2 * math.pi)


def _sato_tate_cdf_array(theta: np.ndarray) -> np.ndarray:
    return theta / math.pi - np.sin(2 * theta) / (2 * math.pi)


def _deuring_cdf_array(theta: np.ndarray, side: str) -> np.ndarray:
    atom = theta >= _HALF_PI if side == "right" else theta > _HALF_PI
    return theta / (2 * math.pi) + 0.5 * atom


def simpson_sato_tate_mass(a: float, b: float, panels: int = 4096) -> float:
    """Composite-Simpson mass of (2/pi) sin^2 on [a, b]; quadrature oracle."""
    if panels % 2 != 0:
        panels += 1
    x = np.linspace(a, b, panels + 1)
    y = (2 / math.pi) * np.sin(x) ** 2
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float((b - a) / (3 * panels) * np.dot(w, y))


# ---------------------------------------------------------------------------
# Interval unions where sin((m+1) theta) has a fixed sign

def positivity_intervals(m: int) -> list[tuple[float, float]]:
    """Open intervals of [0, pi] where sin((m+1) theta) > 0."""
    if m < 1:
        raise ValueError("m must be >= 1")
    step = math.pi / (m + 1)
    out = []
    j = 0
    while 2 * j < m + 1:
        out.append((2 * j * step, min((2 * j + 1) * step, math.pi)))
        j += 1
    return out


def negativity_intervals(m: int) -> list[tuple[float, float]]:
    """Open intervals of [0, pi] where sin((m+1) theta) < 0."""
    if m < 1:
        raise ValueError("m must be >= 1")
    step = math.pi / (m + 1)
    out = []
    j = 1
    while 2 * j - 1 < m + 1:
        out.append(((2 * j - 1) * step, min(2 * j * step, math.pi)))
        j += 1
    return out


def _interval_measure(intervals: list[tuple[float, float]], measure: str) -> float:
    if measure == "sato_tate":
        return sum(sato_tate_cdf(b) - sato_tate_cdf(a) for a, b in intervals)
    if measure == "uniform":
        return sum(b - a for a, b in intervals) / math.pi
    raise ValueError(f"unknown measure {measure!r}")


def measure_of_positivity_set(m: int, measure: str = "sato_tate") -> float:
    return _interval_measure(positivity_intervals(m), measure)


def measure_of_negativity_set(m: int, measure: str = "sato_tate") -> float:
    return _interval_measure(negativity_intervals(m), measure)


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov

def ks_test(table, reference: str) -> DistributionTestReport:
    """Two-sided one-sample KS statistic of the angle sample.

    The Deuring mixture has an atom at pi/2; the supremum is taken over
    left and right limits at every sample point and at the atom, the
    standard convention for discontinuous reference CDFs.
    """
    if reference not in REFERENCES:
        raise ValueError(f"reference must be one of {REFERENCES}, got {reference!r}")
    if isinstance(table, ThetaTable):
        sample = np.sort(table.theta)
        form_name, bound = table.form_name, table.bound
    else:
        sample = np.sort(np.asarray(table, dtype=np.float64))
        form_name, bound = "sample", 0
    n = len(sample)
    if n == 0:
        raise ValueError("empty sample")
    cands = sample
    if reference == "deuring_mixture":
        cands = np.append(sample, _HALF_PI)
    emp_right = np.searchsorted(sample, cands, side="right") / n
    emp_left = np.searchsorted(sample, cands, side="left") / n
    if reference == "sato_tate":
        ref_right = ref_left = _sato_tate_cdf_array(cands)
    else:
        ref_right = _deuring_cdf_array(cands, "right")
        ref_left = _deuring_cdf_array(cands, "left")
    stat = float(
        max(np.abs(emp_right - ref_right).max(), np.abs(emp_left - ref_left).max())
    )
    return DistributionTestReport(
        form_name=form_name,
        x_bound=bound,
        reference=reference,
        sample_size=n,
        ks_statistic=stat,
    )


def synthetic_sample(reference: str, n: int) -> np.ndarray:
    """Deterministic inverse-CDF sample at the midpoint quantiles (i+1/2)/n."""
    if reference not in REFERENCES:
        raise ValueError(f"reference must be one of {REFERENCES}, got {reference!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    u = (np.arange(n) + 0.5) / n
    if reference == "deuring_mixture":
        out = np.empty(n)
        lowq = u < 0.25
        midq = (u >= 0.25) & (u < 0.75)
        out[lowq] = 2 * math.pi * u[lowq]
        out[midq] = _HALF_PI
        out[~lowq & ~midq] = 2 * math.pi * (u[~lowq & ~midq] - 0.5)
        return out
    lo = np.zeros(n)
    hi = np.full(n, math.pi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        below = _sato_tate_cdf_array(mid) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def histogram_with_reference(
    table: ThetaTable, bins: int = 50, reference: str = "sato_tate"
) -> list[tuple[float, float, int, float]]:
    """(bin_left, bin_right, count, reference_mass) rows over [0, pi]."""
    counts, edges = np.histogram(table.theta, bins=bins, range=(0.0, math.pi))
    if reference == "sato_tate":
        cdf = _sato_tate_cdf_array(edges)
    else:
        # left-continuous CDF matches numpy's half-open bins when the atom
        # at pi/2 falls exactly on an edge
        cdf = _deuring_cdf_array(edges, "left")
        cdf[-1] = 1.0
    masses = np.diff(cdf)
    return [
        (float(edges[i]), float(edges[i + 1]), int(counts[i]), float(masses[i]))
        for i in range(bins)
    ]
