"""Exponent values, partial sums, the Abel identity, and dyadic probes."""

import math
from types import SimpleNamespace

import numpy as np
import pytest

from heckelab.asymptotics import (
    abscissa_probe,
    block_ratios,
    delta_m,
    geometric_mean,
    partial_summation_check,
    partial_sums,
)
from heckelab.hecke import theta_table
from heckelab.sympower import assemble_multiplicative

# tau(1..10), the classical values, frozen for an independent A(10) oracle
TAU_HEAD = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


class ConstantStream:
    """Synthetic stream with value(n) = c, for closed-form cross-checks."""

    def __init__(self, x, c=1.0, m=1, kind="power", block_size=256):
        self.x = x
        self.c = c
        self.m = m
        self.kind = kind
        self.block_size = block_size
        self.theta = SimpleNamespace(form_name="synthetic")

    def blocks(self):
        for lo in range(1, self.x + 1, self.block_size):
            hi = min(lo + self.block_size, self.x + 1)
            yield lo, np.full(hi - lo, self.c)


class TestDeltaExponent:
    def test_m1_closed_value(self):
        assert delta_m(1) == pytest.approx(1 - 8 / (3 * math.pi), abs=1e-15)
        assert delta_m(1) == pytest.approx(0.151174, abs=1e-6)

    def test_m2_value(self):
        # cot(pi/6) = sqrt(3)
        assert delta_m(2) == pytest.approx(0.173007, abs=1e-6)
        assert delta_m(2) == pytest.approx(1 - 3 * math.sqrt(3) / (2 * math.pi), abs=1e-15)

    def test_range_up_to_thousand(self):
        values = [delta_m(m) for m in range(1, 1001)]
        assert all(0.0 < v < 1.0 for v in values)

    def test_rejects_m_below_one(self):
        with pytest.raises(ValueError):
            delta_m(0)


class TestPartialSums:
    def test_a_of_one(self):
        rep = partial_sums(ConstantStream(10), [1])
        assert rep.checkpoints[0] == (1, 1.0, 1.0)

    def test_delta_first_ten_against_frozen_tau(self, delta_10k):
        tab = theta_table(delta_10k)
        stream = assemble_multiplicative(tab, 1, 100, "power")
        rep = partial_sums(stream, [10])
        expected = sum(abs(t) / n**5.5 for n, t in enumerate(TAU_HEAD, start=1))
        assert rep.sum_at(10) == pytest.approx(expected, rel=1e-9)

    def test_ratio_definition(self):
        stream = ConstantStream(1000, c=2.0)
        rep = partial_sums(stream, [100, 1000])
        d = delta_m(1)
        assert rep.ratio_at(100) == pytest.approx(200 * math.log(100) ** d / 100, rel=1e-12)
        assert rep.sum_at(1000) == pytest.approx(2000.0, rel=1e-12)

    def test_monotone_sums(self, delta_10k):
        tab = theta_table(delta_10k)
        stream = assemble_multiplicative(tab, 2, 10_000, "sym")
        rep = partial_sums(stream, [10, 100, 1000, 10_000])
        sums = [a for _, a, _ in rep.checkpoints]
        assert sums == sorted(sums)

    def test_checkpoint_validation(self):
        with pytest.raises(ValueError):
            partial_sums(ConstantStream(10), [])
        with pytest.raises(ValueError):
            partial_sums(ConstantStream(10), [11])
        with pytest.raises(KeyError):
            partial_sums(ConstantStream(10), [5]).ratio_at(6)


class TestPartialSummation:
    def test_constant_stream_closed_form(self):
        stream = ConstantStream(100)
        lhs, rhs, residual = partial_summation_check(stream, 2.0, 100)
        assert lhs == pytest.approx(sum(1 / n**2 for n in range(1, 101)), rel=1e-14)
        assert abs(lhs - rhs) <= 1e-12 * lhs
        assert residual <= 1e-12

    def test_degenerate_n_equal_one(self):
        lhs, rhs, residual = partial_summation_check(ConstantStream(5), 1.0, 1)
        assert lhs == 1.0 and rhs == 1.0 and residual == 0.0

    @pytest.mark.parametrize("beta", [0.5, 1.0, 1.5])
    def test_real_stream_residual(self, delta_10k, beta):
        tab = theta_table(delta_10k)
        stream = assemble_multiplicative(tab, 1, 10_000, "power")
        _, _, residual = partial_summation_check(stream, beta, 10_000)
        assert residual <= 1e-9

    def test_block_boundary_crossing(self, delta_10k):
        tab = theta_table(delta_10k)
        a = assemble_multiplicative(tab, 2, 3000, "sym", block_size=128)
        b = assemble_multiplicative(tab, 2, 3000, "sym")
        for stream in (a, b):
            lhs, rhs, residual = partial_summation_check(stream, 1.0, 2500)
            assert residual <= 1e-12
        la = partial_summation_check(a, 1.0, 2500)[0]
        lb = partial_summation_check(b, 1.0, 2500)[0]
        assert la == pytest.approx(lb, rel=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            partial_summation_check(ConstantStream(10), 0.0, 5)
        with pytest.raises(ValueError):
            partial_summation_check(ConstantStream(10), 1.0, 11)


class TestAbscissaProbe:
    def test_constant_stream_sigma_two_halves(self):
        stream = ConstantStream(1 << 13)
        tjs = abscissa_probe(stream, 2.0, range(8, 13))
        ratios = block_ratios(tjs)
        assert geometric_mean(ratios) == pytest.approx(0.5, rel=0.02)

    def test_sums_match_direct_evaluation(self):
        stream = ConstantStream(1 << 8)
        tjs = abscissa_probe(stream, 1.5, range(3, 8))
        for j, t in tjs:
            direct = sum(n**-1.5 for n in range(2**j + 1, 2 ** (j + 1) + 1))
            assert t == pytest.approx(direct, rel=1e-12)

    def test_real_stream_tracks_expected_rate(self, delta_10k):
        tab = theta_table(delta_10k)
        stream = assemble_multiplicative(tab, 1, 1 << 13, "power")
        for sigma in (1.1, 0.9):
            tjs = abscissa_probe(stream, sigma, range(7, 13))
            gm = geometric_mean(block_ratios(tjs))
            assert abs(gm / 2 ** (1 - sigma) - 1) <= 0.10, sigma

    def test_validation(self):
        with pytest.raises(ValueError):
            abscissa_probe(ConstantStream(100), 0.0, range(2, 4))
        with pytest.raises(ValueError):
            abscissa_probe(ConstantStream(100), 1.0, range(2, 8))
        with pytest.raises(ValueError):
            abscissa_probe(ConstantStream(100), 1.0, [])
        with pytest.raises(ValueError):
            geometric_mean([])
