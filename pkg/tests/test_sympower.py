"""Local factor coefficients, divisor bounds, and multiplicative streams."""

import itertools
import math
import random

import numpy as np
import pytest

from heckelab.hecke import lambda_prime_power_chebyshev, sign_prime_power, theta_table
from heckelab.primes import primes_up_to
from heckelab.sympower import (
    SymCoefficientStream,
    assemble_multiplicative,
    divisor_bound,
    divisor_bound_table,
    sym_local_coefficients,
)


def brute_force_ordered_factorizations(n: int, parts: int) -> int:
    """Count ordered tuples of `parts` naturals with product n, by enumeration."""
    if parts == 1:
        return 1
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += brute_force_ordered_factorizations(n // d, parts - 1)
    return total


@pytest.fixture(scope="module")
def delta_theta(delta_10k):
    return theta_table(delta_10k)


class TestLocalCoefficients:
    def test_c0_is_one_and_c1_is_prime_value(self):
        rng = random.Random(404)
        for _ in range(1000):
            theta = rng.uniform(0, math.pi)
            m = rng.randint(1, 8)
            c = sym_local_coefficients(theta, m, 3)
            assert c[0] == 1.0
            assert abs(c[1] - lambda_prime_power_chebyshev(theta, m)) <= 1e-9

    def test_m1_coefficients_follow_chebyshev(self):
        rng = random.Random(808)
        for _ in range(1000):
            theta = rng.uniform(1e-3, math.pi - 1e-3)
            k = rng.randint(1, 8)
            c = sym_local_coefficients(theta, 1, k)
            expected = lambda_prime_power_chebyshev(theta, k)
            assert abs(c[k] - expected) <= 1e-9

    def test_right_angle_m2(self):
        c = sym_local_coefficients(math.pi / 2, 2, 1)
        assert c[1] == pytest.approx(-1.0, abs=1e-12)

    def test_theta_zero_gives_binomials(self):
        # all eigenvalues 1: c_k = h_k(1,..,1) = C(k+m, m)
        c = sym_local_coefficients(0.0, 2, 4)
        assert c[2] == pytest.approx(6.0, abs=1e-9)
        assert [round(v) for v in c] == [1, 3, 6, 10, 15]

    def test_validation(self):
        with pytest.raises(ValueError):
            sym_local_coefficients(-0.5, 2, 3)
        with pytest.raises(ValueError):
            sym_local_coefficients(0.5, 0, 3)
        with pytest.raises(ValueError):
            sym_local_coefficients(0.5, 2, 0)


class TestDivisorBound:
    def test_d2_of_six(self):
        assert divisor_bound(6, 1) == 4

    def test_d3_of_four_matches_enumeration(self):
        assert brute_force_ordered_factorizations(4, 3) == 6
        assert divisor_bound(4, 2) == 6

    def test_at_one(self):
        for m in range(1, 6):
            assert divisor_bound(1, m) == 1

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_table_matches_enumeration_to_sixty(self, m):
        table = divisor_bound_table(60, m)
        for n in range(1, 61):
            assert table[n] == brute_force_ordered_factorizations(n, m + 1), (n, m)

    def test_prime_power_binomial_identity(self):
        # d_{m+1}(p^e) = C(e+m, m)
        for m, e in itertools.product(range(1, 5), range(0, 7)):
            assert divisor_bound(2**e, m) == math.comb(e + m, m)

    def test_validation(self):
        with pytest.raises(ValueError):
            divisor_bound(0, 1)
        with pytest.raises(ValueError):
            divisor_bound_table(10, 0)


class TestStreams:
    def test_sym_m1_reproduces_normalized_coefficients(self, delta_10k, delta_theta):
        stream = assemble_multiplicative(delta_theta, 1, 10_000, "sym")
        vals = stream.values_array()
        worst = max(
            abs(vals[n - 1] - delta_10k.lambda_at(n)) for n in range(1, 10_001)
        )
        assert worst <= 1e-9

    def test_prime_values_equal_for_both_kinds(self, delta_theta):
        sym = assemble_multiplicative(delta_theta, 3, 5000, "sym").values_array()
        pwr = assemble_multiplicative(delta_theta, 3, 5000, "power").values_array()
        for p in primes_up_to(5000).tolist():
            assert sym[p - 1] == pytest.approx(pwr[p - 1], abs=1e-12)

    def test_twelve_factors(self, delta_theta):
        for kind in ("sym", "power"):
            vals = assemble_multiplicative(delta_theta, 2, 100, kind).values_array()
            assert vals[11] == pytest.approx(vals[3] * vals[2], rel=1e-12)

    @pytest.mark.parametrize("kind", ["sym", "power"])
    def test_multiplicativity_1000_random_coprime_pairs(self, delta_theta, kind):
        stream = assemble_multiplicative(delta_theta, 2, 10_000, kind)
        vals = stream.values_array()
        rng = random.Random(99)
        done = 0
        while done < 1000:
            a = rng.randint(2, 99)
            b = rng.randint(2, 10_000 // a)
            if math.gcd(a, b) != 1:
                continue
            done += 1
            lhs = vals[a * b - 1]
            rhs = vals[a - 1] * vals[b - 1]
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs), abs(rhs)), (a, b)

    def test_value_one_is_one(self, delta_theta):
        for kind in ("sym", "power"):
            assert assemble_multiplicative(delta_theta, 5, 50, kind).value_at(1) == 1.0

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_divisor_bound_envelope(self, delta_theta, m):
        vals = assemble_multiplicative(delta_theta, m, 10_000, "sym").values_array()
        bound = divisor_bound_table(10_000, m)[1:].astype(np.float64)
        assert (np.abs(vals) <= bound + 1e-6).all()

    def test_power_kind_signs_match_exact_at_prime_powers(self, delta_10k, delta_theta):
        vals = assemble_multiplicative(delta_theta, 2, 10_000, "power").values_array()
        for p in primes_up_to(100).tolist():
            p = int(p)
            e = 1
            while p**e <= 10_000:
                v = float(vals[p**e - 1])
                if abs(v) > 1e-6:
                    got = (v > 0) - (v < 0)
                    assert got == sign_prime_power(delta_10k, p, 2 * e), (p, e)
                e += 1

    def test_block_iteration_matches_materialized(self, delta_theta):
        stream = assemble_multiplicative(delta_theta, 2, 3000, "sym", block_size=256)
        seen = []
        starts = []
        for lo, vals in stream.blocks():
            starts.append(lo)
            seen.append(vals.copy())
        assert starts == list(range(1, 3001, 256))
        glued = np.concatenate(seen)
        assert len(glued) == 3000
        reference = assemble_multiplicative(delta_theta, 2, 3000, "sym").values_array()
        assert np.array_equal(glued, reference)

    def test_ramified_prime_handling_power_kind(self, forms_10k):
        series = forms_10k["lvl32"]
        tab = theta_table(series)
        vals = assemble_multiplicative(tab, 1, 2000, "power").values_array()
        # a(2) = 0 at the ramified prime, so every even index vanishes
        assert all(vals[n - 1] == 0.0 for n in range(2, 2001, 2))
        # odd part matches the normalized coefficients
        worst = max(abs(vals[n - 1] - series.lambda_at(n)) for n in range(1, 2001, 2))
        assert worst <= 1e-9

    def test_sym_rejected_above_level_one(self, forms_10k):
        tab = theta_table(forms_10k["lvl11"])
        with pytest.raises(ValueError, match="level 1"):
            assemble_multiplicative(tab, 2, 1000, "sym")

    def test_bound_and_kind_validation(self, delta_theta):
        with pytest.raises(ValueError, match="bound"):
            assemble_multiplicative(delta_theta, 2, 20_000, "sym")
        with pytest.raises(ValueError, match="kind"):
            assemble_multiplicative(delta_theta, 2, 100, "euler")
        with pytest.raises(ValueError):
            assemble_multiplicative(delta_theta, 0, 100, "sym")

    def test_stream_repr_smoke(self, delta_theta):
        stream = SymCoefficientStream(theta=delta_theta, m=1, x=10, kind="sym")
        assert "kind='sym'" in repr(stream)
