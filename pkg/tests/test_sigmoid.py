import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ridgekit.sigmoid import (
    MonicPoly,
    SigmoidParams,
    calkin_wilf,
    cw_index,
    eval_network,
    fit_two_neuron,
    monic_enum,
    monic_index,
    rational_enum,
    rational_index,
    sigma,
)
from ridgekit.core import parse_expression

P = SigmoidParams(2.0, 0.25)


class TestEnumeration:
    def test_first_positive_rationals(self):
        want = [Fraction(1), Fraction(1, 2), Fraction(2), Fraction(1, 3),
                Fraction(3, 2), Fraction(2, 3), Fraction(3), Fraction(1, 4)]
        assert [calkin_wilf(n) for n in range(1, 9)] == want

    def test_iterated_recurrence_oracle(self):
        q = Fraction(1)
        for n in range(1, 2000):
            assert calkin_wilf(n) == q
            q = 1 / (2 * (q.numerator // q.denominator) - q + 1)

    @given(st.integers(1, 10**9))
    @settings(max_examples=200)
    def test_index_inverts_enumeration(self, n):
        assert cw_index(calkin_wilf(n)) == n

    def test_signed_enumeration_covers_both_signs(self):
        vals = [rational_enum(k) for k in range(1, 9)]
        assert any(v > 0 for v in vals) and any(v < 0 for v in vals)

    @given(st.integers(1, 10**6))
    @settings(max_examples=100)
    def test_signed_round_trip(self, k):
        assert rational_index(rational_enum(k)) == k

    def test_first_monic_polynomials(self):
        # 1, x^2, x, x^2 - x, x^2 - 1, x^3, x - 1, x^2 + x
        expected = [
            (), (0, 0), (0,), (0, -1), (-1, 0), (0, 0, 0), (-1,), (0, 1),
        ]
        for n, coeffs in enumerate(expected, start=1):
            assert tuple(monic_enum(n).coeffs) == coeffs

    @given(st.integers(1, 10**5))
    @settings(max_examples=300)
    def test_monic_round_trip(self, n):
        assert monic_index(monic_enum(n)) == n

    def test_huge_index_guarded(self):
        with pytest.raises(OverflowError):
            cw_index(Fraction(10**40 + 1, 10**40), max_bits=1000)


class TestActivation:
    def test_limits(self):
        assert sigma(-2e6, P) < 1e-3
        assert 0.94 < sigma(1e6, P) < 1.0

    def test_monotone_on_left_tail(self):
        xs = np.linspace(-60, 2.0, 500)
        assert np.all(np.diff(sigma(xs, P)) >= -1e-15)

    def test_sandwich_above_envelope(self):
        xs = np.linspace(2.0, 400.0, 4000)
        vals = sigma(xs, P)
        assert np.all(vals > P.h(xs)) and np.all(vals < 1.0)

    def test_closed_forms_at_segment_ends(self):
        h6 = P.h(6.0)
        assert sigma(2.0, P) == pytest.approx((1 + h6) / 2, abs=1e-12)
        assert sigma(0.0, P) == pytest.approx(
            (1 - math.exp(-0.5)) * (1 + h6) / 2, abs=1e-12)

    def test_smooth_across_segment_joints(self):
        for knot in (4.0, 6.0, 8.0, 10.0, 12.0):
            h = 1e-5
            dl = (sigma(knot, P) - sigma(knot - h, P)) / h
            dr = (sigma(knot + h, P) - sigma(knot, P)) / h
            assert abs(dl - dr) <= 1e-3

    def test_other_parameters(self):
        q = SigmoidParams(1.0, 0.1)
        xs = np.linspace(1.0, 50.0, 500)
        vals = sigma(xs, q)
        assert np.all(vals > q.h(xs)) and np.all(vals < 1.0)


class TestFitting:
    def test_cubic_is_reproduced_on_a_segment(self):
        f = parse_expression("x1^3 + x1^2 - 5*x1 + 3", 1)
        net, achieved = fit_two_neuron(f, -1.0, 1.0, 1e-9)
        assert net.theta2 == -3
        assert net.theta1_exact == -459 and net.n == 115
        xs = np.linspace(-1, 1, 1001)
        resid = np.abs(np.array([f(x) for x in xs])
                       - np.array([eval_network(net, x) for x in xs]))
        assert float(resid.max()) <= 1e-8

    def test_constant_function(self):
        f = parse_expression("5", 1)
        net, achieved = fit_two_neuron(f, -1.0, 1.0, 0.01)
        assert achieved <= 1e-12

    def test_zero_function(self):
        f = parse_expression("0", 1)
        net, achieved = fit_two_neuron(f, -1.0, 1.0, 0.01)
        assert net.c1 == 0.0 and net.c2 == 0.0 and achieved == 0.0

    @pytest.mark.parametrize("eps", [0.6, 0.1])
    def test_rational_target_meets_tolerance(self, eps):
        f = parse_expression("4*x1/(4+x1^2)", 1)
        net, achieved = fit_two_neuron(f, -1.0, 1.0, eps)
        assert achieved <= eps and net.theta2 == -3

    def test_general_interval(self):
        f = parse_expression("x1^2", 1)
        net, achieved = fit_two_neuron(f, 2.0, 5.0, 1e-6)
        assert achieved <= 1e-6
        assert net.theta2 == 2 * 2.0 - 5.0
        assert eval_network(net, 3.0) == pytest.approx(9.0, abs=1e-6)

    def test_domain_checked_on_eval(self):
        f = parse_expression("x1", 1)
        net, _ = fit_two_neuron(f, 0.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            eval_network(net, 2.0)


class TestMonicPoly:
    def test_horner_and_derivative_bound(self):
        p = MonicPoly((1, -2))  # x^2 - 2x + 1
        assert p(3.0) == pytest.approx(4.0)
        assert p.derivative_bound(1.5) >= 2 * 1.5 - 2

    def test_equality(self):
        assert MonicPoly((0, 1)) == MonicPoly((0, 1))
        assert MonicPoly((0, 1)) != MonicPoly((0,))
