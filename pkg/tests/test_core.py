import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ridgekit.core import (
    DirectionSet,
    PointConfig,
    RidgeSum,
    UnivariateTable,
    grid_minimax_oracle,
    parse_expression,
    parse_vector,
    rational,
    tensor_quadrature,
)


class TestRational:
    def test_decimal_string_is_exact(self):
        assert rational("0.1") == Fraction(1, 10)
        assert rational("-2.5") == Fraction(-5, 2)
        assert rational("3/7") == Fraction(3, 7)

    def test_float_is_converted_exactly(self):
        assert rational(0.5) == Fraction(1, 2)
        assert rational(0.25) == Fraction(1, 4)

    @given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
    def test_fraction_round_trip(self, p, q):
        f = Fraction(p, q)
        assert rational(str(f)) == f

    def test_parse_vector_forms(self):
        assert parse_vector("1, 2, 3") == (1, 2, 3)
        assert parse_vector("0.5 -1/3") == (Fraction(1, 2), Fraction(-1, 3))
        assert parse_vector((1, "1/2")) == (1, Fraction(1, 2))


class TestConfigs:
    def test_points_must_be_distinct(self):
        with pytest.raises(ValueError):
            PointConfig(2, [(0, 0), (0, 0)])

    def test_dimension_checked(self):
        with pytest.raises(ValueError):
            PointConfig(2, [(0, 0, 0)])

    def test_parallel_directions_rejected(self):
        with pytest.raises(ValueError):
            DirectionSet(2, [(1, 2), (2, 4)])

    def test_zero_direction_rejected(self):
        with pytest.raises(ValueError):
            DirectionSet(2, [(0, 0)])


class TestExpressions:
    def test_polynomial(self):
        f = parse_expression("x1^3 + 2*x1 - 1", 1)
        assert f(2.0) == pytest.approx(11.0)

    def test_multivariate_and_functions(self):
        f = parse_expression("sin(x1)*x2 + exp(-x2)", 2)
        assert f(1.0, 0.0) == pytest.approx(1.0)
        assert f(1.0, 2.0) == pytest.approx(2 * math.sin(1.0) + math.exp(-2.0))

    def test_vectorized(self):
        f = parse_expression("x1*x2", 2)
        out = f(np.array([1.0, 2.0]), np.array([3.0, 4.0]))
        assert np.allclose(out, [3.0, 8.0])

    def test_syntax_error_reported(self):
        with pytest.raises(ValueError):
            parse_expression("x1 +", 1)

    def test_unknown_variable_rejected(self):
        with pytest.raises(ValueError):
            parse_expression("x3", 2)

    @given(st.floats(-3, 3), st.floats(-3, 3))
    @settings(max_examples=50)
    def test_matches_reference(self, x, y):
        f = parse_expression("x1^2*x2 - cos(x1 + x2)", 2)
        assert f(x, y) == pytest.approx(x * x * y - math.cos(x + y), abs=1e-12)


class TestUnivariateTable:
    def test_interpolates_linearly(self):
        t = UnivariateTable([0.0, 1.0, 2.0], [0.0, 2.0, 0.0])
        assert t(0.5) == pytest.approx(1.0)
        assert np.allclose(t(np.array([0.0, 2.0])), [0.0, 0.0])

    def test_out_of_range_raises(self):
        t = UnivariateTable([0.0, 1.0], [0.0, 1.0])
        with pytest.raises(ValueError):
            t(3.0)

    def test_nonincreasing_knots_rejected(self):
        with pytest.raises(ValueError):
            UnivariateTable([0.0, 0.0, 1.0], [1.0, 2.0, 3.0])


class TestRidgeSum:
    def test_evaluates_sum_of_ridge_terms(self):
        rs = RidgeSum([((1, 0), lambda t: t**2), ((0, 1), np.sin)], dim=2)
        assert rs(2.0, 0.5) == pytest.approx(4.0 + math.sin(0.5))


class TestQuadratureAndOracle:
    def test_tensor_quadrature_exact_for_polynomials(self):
        val = tensor_quadrature(lambda x, y: x * x * y,
                                [(0.0, 1.0), (0.0, 2.0)], 8)
        assert val == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_minimax_oracle_on_separable_function(self):
        # xy on the unit-square grid: best error by sums g(x)+h(y) is 1/4
        xs = np.linspace(0, 1, 21)
        pts = np.array([(x, y) for x in xs for y in xs])
        err = grid_minimax_oracle(lambda x, y: x * y, [(1, 0), (0, 1)], pts)
        assert err == pytest.approx(0.25, abs=5e-3)

    def test_minimax_oracle_zero_for_ridge_input(self):
        xs = np.linspace(0, 1, 11)
        pts = np.array([(x, y) for x in xs for y in xs])
        err = grid_minimax_oracle(lambda x, y: x + np.sin(y),
                                  [(1, 0), (0, 1)], pts)
        assert abs(err) <= 1e-9
