"""Reduced-scale invariant suite behind the `selftest` CLI command."""

from __future__ import annotations

import math
import random
from typing import Callable

import numpy as np

from . import asymptotics, stats, sympower
from .forms import (
    REGISTRY,
    cm_vanishing_failures,
    deligne_violations,
    expand,
    hecke_p2_failures,
    multiplicativity_failures,
)
from .hecke import (
    lambda_prime_power_chebyshev,
    lambda_prime_power_exact,
    theta_table,
)
from .primes import primes_up_to
from .series import IntSeries, eta_power_series, mul, mul_schoolbook, densify

_CM_VANISHING = {"lvl27": (3, 2), "lvl32": (4, 3)}


class CheckFailure(AssertionError):
    pass


def _require(cond: bool, detail: str) -> None:
    if not cond:
        raise CheckFailure(detail)


def run_selftest(X: int = 10_000, seed: int = 20260811) -> list[tuple[str, bool, str]]:
    """Run every check at reduced scale; returns (name, ok, detail) rows."""
    rng = random.Random(seed)
    results: list[tuple[str, bool, str]] = []
    series_cache = {}

    def get_series(name: str):
        if name not in series_cache:
            series_cache[name] = expand(name, X, use_cache=False)
        return series_cache[name]

    def check(name: str, fn: Callable[[], str | None]) -> None:
        try:
            detail = fn() or "ok"
            results.append((name, True, detail))
        except Exception as exc:  # noqa: BLE001 - report, do not crash the suite
            results.append((name, False, f"{type(exc).__name__}: {exc}"))

    def fast_vs_schoolbook():
        for case in range(20):
            prec = rng.randint(8, 256)
            a = IntSeries([rng.randint(-50, 50) for _ in range(prec + 1)])
            b = IntSeries([rng.randint(-50, 50) for _ in range(prec + 1)])
            _require(
                mul(a, b, method="ntt") == mul_schoolbook(a, b),
                f"fast/schoolbook mismatch on case {case}",
            )
        return "20 random products agree"

    check("series.fast_path_matches_schoolbook", fast_vs_schoolbook)

    def eta_identity():
        cube = densify(eta_power_series(3, 500))
        single = densify(eta_power_series(1, 500))
        lhs = mul(cube, cube)
        sq = mul(single, single)
        rhs = mul(mul(sq, sq), sq)
        _require(lhs == rhs, "cube-identity mismatch at X=500")
        return "eta identity holds at X=500"

    check("series.eta_cube_identity", eta_identity)

    def expansions():
        delta = get_series("delta")
        _require(
            delta.a[1:8] == [1, -24, 252, -1472, 4830, -6048, -16744],
            f"delta head {delta.a[1:8]}",
        )
        for name in REGISTRY:
            s = get_series(name)
            _require(s.a[1] == 1, f"{name}: a(1) != 1")
            bad = multiplicativity_failures(s, pairs=100, seed=rng.randint(0, 10**9))
            _require(not bad, f"{name}: multiplicativity failures {bad[:3]}")
            bad = hecke_p2_failures(s)
            _require(not bad, f"{name}: p^2 relation failures {bad[:3]}")
            bad = deligne_violations(s)
            _require(not bad, f"{name}: Deligne violations {bad[:3]}")
        for name, (mod, res) in _CM_VANISHING.items():
            bad = cm_vanishing_failures(get_series(name), mod, res)
            _require(not bad, f"{name}: nonzero a(p) at p={bad[:3]}")
        return f"4 forms expanded and scanned at X={X}"

    check("forms.expansion_invariants", expansions)

    def chebyshev_cross():
        ps = primes_up_to(min(X, 10_000)).tolist()
        for name in REGISTRY:
            s = get_series(name)
            tab = theta_table(s)
            unram = [p for p in ps if s.form.level % p != 0]
            for _ in range(500):
                p = rng.choice(unram)
                m = rng.randint(1, 10)
                idx = int(np.searchsorted(tab.primes, p))
                approx = lambda_prime_power_chebyshev(float(tab.theta[idx]), m)
                exact = lambda_prime_power_exact(s, p, m)
                tol = 1e-6 * max(abs(exact.lambda_value), 1e-6)
                _require(
                    abs(approx - exact.lambda_value) <= tol,
                    f"{name} p={p} m={m}: {approx} vs {exact.lambda_value}",
                )
                if abs(exact.lambda_value) > 1e-6:
                    _require(
                        (approx > 0) == (exact.sign > 0),
                        f"{name} p={p} m={m}: sign mismatch",
                    )
        return "500 random (p, m) pairs per form"

    check("hecke.chebyshev_vs_exact", chebyshev_cross)

    def sym_prime_identity():
        s = get_series("delta")
        tab = theta_table(s)
        for _ in range(200):
            i = rng.randrange(len(tab.primes))
            m = rng.randint(1, 8)
            c = sympower.sym_local_coefficients(float(tab.theta[i]), m, 2)
            ref = lambda_prime_power_chebyshev(float(tab.theta[i]), m)
            _require(abs(c[1] - ref) <= 1e-9, f"c_1 mismatch at i={i}, m={m}")
        return "local c_1 equals degree-m value, 200 samples"

    check("sympower.prime_identity", sym_prime_identity)

    def divisor_bound_check():
        s = get_series("delta")
        tab = theta_table(s)
        top = min(2000, X)
        for m in (1, 2, 3, 4):
            stream = sympower.assemble_multiplicative(tab, m, top, "sym")
            vals = stream.values_array()
            bound = sympower.divisor_bound_table(top, m)[1:].astype(np.float64)
            _require(
                bool((np.abs(vals) <= bound + 1e-6).all()),
                f"divisor bound violated for m={m}",
            )
        return f"|values| <= d_(m+1) + 1e-6 up to {top}, m <= 4"

    check("sympower.divisor_bound", divisor_bound_check)

    def stream_multiplicativity():
        s = get_series("delta")
        tab = theta_table(s)
        top = min(10_000, X)
        for kind in sympower.STREAM_KINDS:
            stream = sympower.assemble_multiplicative(tab, 2, top, kind)
            vals = stream.values_array()
            done = 0
            while done < 100:
                a = rng.randint(2, 80)
                b = rng.randint(2, top // a)
                if math.gcd(a, b) != 1:
                    continue
                done += 1
                lhs = vals[a * b - 1]
                rhs = vals[a - 1] * vals[b - 1]
                _require(
                    abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs)),
                    f"{kind}: value({a}*{b}) != value({a})*value({b})",
                )
        return "100 coprime pairs per kind"

    check("sympower.stream_multiplicativity", stream_multiplicativity)

    def density_forms():
        for m in range(1, 51):
            for cm in (False, True):
                d = stats.predicted_density(m, cm)
                _require(min(d) >= 0, f"negative density at m={m}, cm={cm}")
                _require(abs(sum(d) - 1) <= 1e-12, f"densities sum != 1 at m={m}")
            closed = stats.predicted_density(m, False)[0]
            interval = stats.measure_of_positivity_set(m)
            _require(abs(closed - interval) <= 1e-10, f"closed form != intervals at m={m}")
            if m % 2 == 1:
                sym_gap = abs(
                    stats.measure_of_positivity_set(m) - stats.measure_of_negativity_set(m)
                )
                _require(sym_gap <= 1e-10, f"odd-m symmetry broken at m={m}")
        return "closed forms, interval measures, odd symmetry for m <= 50"

    check("stats.predicted_density_chain", density_forms)

    def simpson_oracle():
        for _ in range(50):
            a = rng.uniform(0, math.pi)
            b = rng.uniform(a, math.pi)
            closed = stats.sato_tate_cdf(b) - stats.sato_tate_cdf(a)
            quad = stats.simpson_sato_tate_mass(a, b)
            _require(abs(closed - quad) <= 1e-8, f"Simpson mismatch on [{a}, {b}]")
        return "50 random subintervals agree to 1e-8"

    check("stats.simpson_oracle", simpson_oracle)

    def ks_synthetic():
        for ref in stats.REFERENCES:
            sample = stats.synthetic_sample(ref, 10_000)
            rep = stats.ks_test(sample, ref)
            _require(rep.ks_statistic <= 0.01, f"{ref}: KS {rep.ks_statistic}")
        return "synthetic inverse-CDF samples pass at 0.01"

    check("stats.ks_self_consistency", ks_synthetic)

    def empirical_small():
        rep = stats.empirical_sign_density(get_series("delta"), 1)
        _require(rep.max_abs_error <= 0.05, f"delta m=1 errors {rep.abs_errors}")
        rep = stats.empirical_sign_density(get_series("lvl32"), 1)
        _require(rep.max_abs_error <= 0.05, f"lvl32 m=1 errors {rep.abs_errors}")
        return f"sign frequencies near predictions at X={X}"

    check("stats.empirical_sign_density", empirical_small)

    def partial_summation():
        s = get_series("delta")
        tab = theta_table(s)
        top = min(5000, X)
        stream = sympower.assemble_multiplicative(tab, 1, top, "power")
        for beta in (0.5, 1.0, 1.5):
            _, _, residual = asymptotics.partial_summation_check(stream, beta, top)
            _require(residual <= 1e-9, f"residual {residual} at beta={beta}")
        return "Abel identity residual <= 1e-9"

    check("asymptotics.partial_summation", partial_summation)

    def delta_exponent():
        for m in range(1, 1001):
            d = asymptotics.delta_m(m)
            _require(0 < d < 1, f"delta_{m} = {d} outside (0,1)")
        return "exponent in (0,1) for m <= 1000"

    check("asymptotics.delta_m_range", delta_exponent)

    return results
