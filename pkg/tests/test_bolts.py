import numpy as np
import pytest

from ridgekit.bolts import (
    AxisRect,
    ClassViolated,
    ClosedBolt,
    Hexagon,
    L,
    Octagon,
    StairPolygon,
    class_check,
    ebolts,
    golomb_lower_bound,
    hexagon_error,
    l,
    maximize_bolt,
    octagon_error,
    random_bolt,
    sharp_bounds,
    stairlike_error,
    uc_best,
    vc_best,
)
from ridgekit.core import grid_minimax_oracle


def xy(x, y):
    return np.asarray(x) * np.asarray(y)


class TestFunctionals:
    def test_rect_functional_of_product(self):
        # L(xy, [0,1]^2) = (1*1 + 0*0 - 0*1 - 1*0)/4
        assert L(xy, AxisRect(0, 1, 0, 1)) == pytest.approx(0.25)

    def test_rect_functional_additive_in_columns(self):
        r = AxisRect(0, 2, 0, 1)
        r1, r2 = AxisRect(0, 1, 0, 1), AxisRect(1, 2, 0, 1)
        f = lambda x, y: np.exp(np.asarray(x)) * np.asarray(y)
        assert L(f, r) == pytest.approx(L(f, r1) + L(f, r2))

    def test_bolt_functional_annihilates_ridge_sums(self):
        pts = [(0, 0), (0, 2), (1, 2), (1, 1), (3, 1), (3, 0)]
        f = lambda x, y: np.sin(np.asarray(x)) + np.asarray(y) ** 2
        assert abs(l(f, pts)) <= 1e-12

    def test_closed_bolt_validation(self):
        with pytest.raises(ValueError):
            ClosedBolt([(0, 0), (1, 1), (2, 2), (3, 3)])  # no alternation
        with pytest.raises(ValueError):
            ClosedBolt([(0, 0), (0, 1)])  # too short


class TestRectangleClasses:
    def test_product_error_and_split_height(self):
        err, phi0, psi0, y0 = vc_best(xy, AxisRect(0, 1, 0, 1), c=1.0)
        assert err == pytest.approx(0.25)
        xs = np.linspace(0, 1, 101)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        resid = np.abs(xy(X, Y) - phi0(X) - psi0(Y))
        assert float(resid.max()) == pytest.approx(err, abs=1e-9)

    def test_uc_matches_grid_lp(self):
        f = lambda x, y: (np.asarray(x) - 0.5) ** 2 * np.asarray(y)
        err, *_ = uc_best(f, AxisRect(0, 1, 0, 1), c=0.5)
        xs = np.linspace(0, 1, 21)
        pts = np.array([(x, y) for x in xs for y in xs])
        lp = grid_minimax_oracle(f, [(1, 0), (0, 1)], pts)
        assert abs(err - lp) <= 5e-3

    def test_class_violation_raises(self):
        with pytest.raises(ClassViolated):
            vc_best(lambda x, y: -xy(x, y), AxisRect(0, 1, 0, 1), c=1.0)


class TestPolygons:
    HEX = Hexagon((0, 1, 2), (0, 1, 2))

    def test_hexagon_ebolt_count_and_error(self):
        assert len(ebolts(self.HEX)) == 3
        rep = hexagon_error(xy, self.HEX)
        assert rep["error"] == pytest.approx(0.5)
        assert not rep["fallback"]

    def test_octagon_ebolt_counts(self):
        qa = Octagon((0, 1, 2, 3), (0, 1, 2), "A")
        qb = Octagon((0, 1, 2, 3), (0, 1, 2), "B")
        assert len(ebolts(qa)) == 5
        assert len(ebolts(qb)) == 3
        assert octagon_error(xy, qa)["error"] > 0
        assert octagon_error(xy, qb)["error"] > 0

    def test_stairlike_bolt_count_is_subsets_of_steps(self):
        s = StairPolygon((0, 1, 2, 3), (0, 1, 2, 3))
        assert len(ebolts(s)) == 2 ** (s.N - 1) - 1
        assert stairlike_error(xy, s)["error"] > 0

    def test_sharp_bounds_bracket_the_error(self):
        bd = sharp_bounds(xy, self.HEX)
        err = hexagon_error(xy, self.HEX)["error"]
        assert bd["lower"] - 1e-12 <= err <= bd["upper"] + 1e-12


class TestMaximizeBolt:
    def test_never_decreases_functional(self):
        H = Hexagon((0, 1, 2), (0, 1, 2))
        rng = np.random.default_rng(7)
        for _ in range(20):
            p = random_bolt(H, rng)
            before = l(xy, p)
            q = maximize_bolt(xy, H, p)
            assert l(xy, q) >= before - 1e-12

    def test_reaches_the_hexagon_error(self):
        H = Hexagon((0, 1, 2), (0, 1, 2))
        rng = np.random.default_rng(3)
        best = 0.0
        for _ in range(50):
            q = maximize_bolt(xy, H, random_bolt(H, rng))
            best = max(best, abs(l(xy, q)))
        assert best == pytest.approx(hexagon_error(xy, H)["error"], abs=1e-9)


class TestGolomb:
    def test_lower_bound_at_most_lp_value(self):
        xs = np.linspace(0, 1, 5)
        pts = [(x, y) for x in xs for y in xs]
        lp = grid_minimax_oracle(xy, [(1, 0), (0, 1)], np.array(pts))
        gl = golomb_lower_bound(xy, pts)
        assert gl <= lp + 1e-9
        assert gl > 0
