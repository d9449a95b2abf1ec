"""Density closed forms, reference distributions, and the KS harness."""

import math

import numpy as np
import pytest

from heckelab.hecke import theta_table
from heckelab.primes import primes_up_to
from heckelab.stats import (
    REFERENCES,
    empirical_sign_density,
    histogram_with_reference,
    ks_test,
    measure_of_negativity_set,
    measure_of_positivity_set,
    negativity_intervals,
    positivity_intervals,
    predicted_density,
    sato_tate_cdf,
    simpson_sato_tate_mass,
    synthetic_sample,
)


class TestPredictedDensity:
    def test_odd_noncm_is_half(self):
        assert predicted_density(1, False) == (0.5, 0.5, 0.0)
        assert predicted_density(7, False) == (0.5, 0.5, 0.0)

    def test_even_noncm_m2(self):
        d = predicted_density(2, False)
        assert d[0] == pytest.approx(0.391002, abs=1e-6)
        assert d[1] == pytest.approx(0.608998, abs=1e-6)
        assert d[2] == 0.0

    def test_even_noncm_m4(self):
        assert predicted_density(4, False)[0] == pytest.approx(0.484367, abs=1e-6)

    def test_cm_odd(self):
        assert predicted_density(1, True) == (0.25, 0.25, 0.5)
        assert predicted_density(3, True) == (0.25, 0.25, 0.5)

    def test_cm_m2(self):
        d = predicted_density(2, True)
        assert d[0] == pytest.approx(1 / 3, abs=1e-12)
        assert d[1] == pytest.approx(2 / 3, abs=1e-12)
        assert d[2] == 0.0

    def test_cm_m4(self):
        d = predicted_density(4, True)
        assert d == (pytest.approx(0.8), pytest.approx(0.2), 0.0)

    @pytest.mark.parametrize("cm", [False, True])
    def test_nonnegative_and_sums_to_one_up_to_100(self, cm):
        for m in range(1, 101):
            d = predicted_density(m, cm)
            assert min(d) >= 0.0
            assert abs(sum(d) - 1.0) <= 1e-12

    def test_rejects_m_below_one(self):
        with pytest.raises(ValueError):
            predicted_density(0, False)


class TestSatoTateCdf:
    def test_endpoints(self):
        assert sato_tate_cdf(0.0) == 0.0
        assert sato_tate_cdf(math.pi) == pytest.approx(1.0, abs=1e-15)

    def test_symmetry_midpoint(self):
        assert sato_tate_cdf(math.pi / 2) == pytest.approx(0.5, abs=1e-15)

    def test_value_at_pi_over_three(self):
        got = sato_tate_cdf(math.pi / 3)
        assert got == pytest.approx(0.195501, abs=1e-6)
        assert got == pytest.approx(simpson_sato_tate_mass(0, math.pi / 3, 10_000), abs=1e-8)

    def test_domain(self):
        with pytest.raises(ValueError):
            sato_tate_cdf(-0.01)
        with pytest.raises(ValueError):
            sato_tate_cdf(math.pi + 0.01)


class TestPositivityMeasures:
    def test_m2_sato_tate_value(self):
        got = measure_of_positivity_set(2, "sato_tate")
        assert got == pytest.approx(0.391002, abs=1e-6)
        assert got == pytest.approx(predicted_density(2, False)[0], abs=1e-12)

    def test_m2_simpson_oracle_over_intervals(self):
        # independent quadrature over (0, pi/3) and (2pi/3, pi)
        quad = simpson_sato_tate_mass(0, math.pi / 3) + simpson_sato_tate_mass(
            2 * math.pi / 3, math.pi
        )
        assert measure_of_positivity_set(2) == pytest.approx(quad, abs=1e-8)

    def test_odd_m_is_half(self):
        for m in (1, 3, 9, 49):
            assert measure_of_positivity_set(m) == pytest.approx(0.5, abs=1e-10)

    def test_m1_uniform(self):
        assert measure_of_positivity_set(1, "uniform") == pytest.approx(0.5, abs=1e-15)

    def test_matches_closed_form_to_fifty(self):
        for m in range(1, 51):
            closed = predicted_density(m, False)[0]
            assert measure_of_positivity_set(m) == pytest.approx(closed, abs=1e-10), m

    def test_odd_symmetry_positive_negative(self):
        for m in range(1, 51, 2):
            gap = abs(measure_of_positivity_set(m) - measure_of_negativity_set(m))
            assert gap <= 1e-10, m

    def test_intervals_partition_up_to_nodes(self):
        for m in (1, 2, 5, 8):
            total = sum(b - a for a, b in positivity_intervals(m))
            total += sum(b - a for a, b in negativity_intervals(m))
            assert total == pytest.approx(math.pi, abs=1e-12)

    def test_simpson_agrees_on_random_subintervals(self):
        rng = np.random.default_rng(2718)
        for _ in range(100):
            a, b = np.sort(rng.uniform(0, math.pi, size=2))
            closed = sato_tate_cdf(float(b)) - sato_tate_cdf(float(a))
            assert abs(closed - simpson_sato_tate_mass(float(a), float(b))) <= 1e-8

    def test_unknown_measure_rejected(self):
        with pytest.raises(ValueError):
            measure_of_positivity_set(2, "lebesgue")


class TestEmpiricalSignDensity:
    def test_counts_partition_unramified_primes_at_100(self, forms_10k):
        for name, series in forms_10k.items():
            rep = empirical_sign_density(series, 3, X=100)
            expected = 25 - sum(1 for p in series.form.ramified_primes() if p <= 100)
            assert sum(rep.counts) == expected, name

    def test_delta_zero_class_empty(self, delta_10k):
        for m in (1, 2, 3, 4):
            rep = empirical_sign_density(delta_10k, m)
            assert rep.counts[2] == 0

    def test_cm_zero_class_matches_vanishing_primes(self, forms_10k):
        series = forms_10k["lvl32"]
        rep = empirical_sign_density(series, 1)
        expected = sum(
            1
            for p in primes_up_to(series.X).tolist()
            if p % 2 and p % 4 == 3
        )
        assert rep.counts[2] == expected

    def test_frequencies_near_prediction_at_small_scale(self, forms_10k):
        # X = 10^4 gives ~1229 primes; 0.05 is a loose 3-sigma envelope
        for name in ("delta", "lvl32", "lvl27"):
            for m in (1, 2):
                rep = empirical_sign_density(forms_10k[name], m)
                assert rep.max_abs_error <= 0.05, (name, m, rep.abs_errors)

    def test_report_fields(self, delta_10k):
        rep = empirical_sign_density(delta_10k, 2, X=5000)
        assert rep.form_name == "delta" and rep.m == 2 and rep.x_bound == 5000
        assert sum(rep.frequencies) == pytest.approx(1.0, abs=1e-12)
        assert rep.n_unramified == sum(rep.counts)

    def test_validation(self, delta_10k):
        with pytest.raises(ValueError):
            empirical_sign_density(delta_10k, 0)
        with pytest.raises(ValueError):
            empirical_sign_density(delta_10k, 1, X=10**7)


class TestKsTest:
    @pytest.mark.parametrize("reference", REFERENCES)
    def test_synthetic_self_consistency(self, reference):
        sample = synthetic_sample(reference, 100_000)
        rep = ks_test(sample, reference)
        assert rep.ks_statistic <= 0.01

    def test_wrong_reference_is_detected(self):
        sample = synthetic_sample("sato_tate", 50_000)
        rep = ks_test(sample, "deuring_mixture")
        assert rep.ks_statistic > 0.2

    def test_theta_table_input(self, delta_10k):
        tab = theta_table(delta_10k)
        rep = ks_test(tab, "sato_tate")
        assert rep.form_name == "delta"
        assert rep.sample_size == len(tab)
        assert 0.0 <= rep.ks_statistic <= 1.0
        assert rep.ks_statistic <= 0.05  # ~1229 primes

    def test_cm_form_against_mixture(self, forms_10k):
        rep = ks_test(theta_table(forms_10k["lvl32"]), "deuring_mixture")
        assert rep.ks_statistic <= 0.05

    def test_atom_convention_catches_missing_atom(self):
        # uniform-only sample: F_n ~ theta/pi, so the gap to the mixture CDF
        # peaks at exactly 1/4 on both sides of the atom
        sample = np.linspace(1e-4, math.pi - 1e-4, 10_000)
        rep = ks_test(sample, "deuring_mixture")
        assert rep.ks_statistic == pytest.approx(0.25, abs=1e-3)

    def test_atom_left_limit_is_evaluated(self):
        # all mass just above pi/2: the sup lives at the atom's left limit
        sample = np.linspace(math.pi / 2 + 1e-6, math.pi - 1e-4, 1000)
        rep = ks_test(sample, "deuring_mixture")
        assert rep.ks_statistic == pytest.approx(0.75, abs=1e-3)

    def test_validation(self):
        with pytest.raises(ValueError):
            ks_test(np.array([1.0]), "gaussian")
        with pytest.raises(ValueError):
            ks_test(np.array([]), "sato_tate")
        with pytest.raises(ValueError):
            synthetic_sample("sato_tate", 0)


class TestHistogram:
    def test_counts_and_masses(self, delta_10k):
        tab = theta_table(delta_10k)
        rows = histogram_with_reference(tab, bins=50)
        assert len(rows) == 50
        assert sum(r[2] for r in rows) == len(tab)
        assert sum(r[3] for r in rows) == pytest.approx(1.0, abs=1e-12)

    def test_deuring_reference_masses(self, forms_10k):
        tab = theta_table(forms_10k["lvl32"])
        rows = histogram_with_reference(tab, bins=50, reference="deuring_mixture")
        assert sum(r[3] for r in rows) == pytest.approx(1.0, abs=1e-12)
        # the atom bin carries the extra half
        atom_rows = [r for r in rows if r[0] <= math.pi / 2 < r[1]]
        assert atom_rows and atom_rows[0][3] > 0.5
