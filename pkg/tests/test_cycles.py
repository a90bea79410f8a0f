import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ridgekit.cycles import (
    CycleExists,
    closed_path_search,
    cycle_functional,
    has_cycle,
    minimal_cycles,
    orbits,
    solve_representation,
    tau_closure,
)

X = (1, 0)
Y = (0, 1)
SQUARE = [(0, 0), (0, 1), (1, 0), (1, 1)]


class TestHasCycle:
    def test_square_is_a_cycle(self):
        found, cert = has_cycle(SQUARE, [X, Y])
        assert found
        # weights annihilate every fiber of both projections
        for a in (X, Y):
            sums = {}
            for idx, w in zip(cert.support, cert.weights):
                p = SQUARE[idx]
                key = a[0] * p[0] + a[1] * p[1]
                sums[key] = sums.get(key, 0) + w
            assert all(v == 0 for v in sums.values())

    def test_triangle_is_cycle_free(self):
        found, cert = has_cycle([(0, 0), (0, 1), (1, 0)], [X, Y])
        assert not found and cert is None

    def test_certificate_weights_normalize_to_unit_mass(self):
        _, cert = has_cycle(SQUARE, [X, Y])
        assert sum(abs(w) for w in cert.normalized_weights()) == Fraction(1)

    @given(st.integers(0, 2**31 - 1))
    @settings(max_examples=25, deadline=None)
    def test_random_product_grids_always_have_cycles(self, seed):
        rng = random.Random(seed)
        xs = rng.sample(range(-20, 21), 3)
        ys = rng.sample(range(-20, 21), 3)
        pts = [(x, y) for x in xs for y in ys]
        found, cert = has_cycle(pts, [X, Y])
        assert found
        fn = cycle_functional(cert, lambda x, y: x * 2.0 + np.sin(y), pts)
        assert abs(fn) <= 1e-12  # annihilates ridge sums


class TestMinimalCycles:
    def test_square_has_one_minimal_cycle(self):
        certs, exhausted = minimal_cycles(SQUARE, [X, Y])
        assert exhausted and len(certs) == 1
        assert sorted(abs(w) for w in certs[0].weights) == [1, 1, 1, 1]

    def test_six_point_grid_minimal_cycles_have_four_points(self):
        pts = [(x, y) for x in (0, 1, 2) for y in (0, 1)]
        certs, exhausted = minimal_cycles(pts, [X, Y], cap=10)
        assert exhausted
        assert all(len(c.support) == 4 for c in certs)
        assert len(certs) == 3


class TestTauAndPaths:
    def test_tau_empties_on_cycle_free_sets(self):
        trace, fixed = tau_closure([(0, 0), (0, 1), (1, 0)], [X, Y])
        assert fixed == []

    def test_square_closed_path_found(self):
        path = closed_path_search(SQUARE, X, Y)
        assert path is not None and len(path) % 2 == 0 and len(path) >= 4

    def test_orbits_union(self):
        pts = [(0, 0), (0, 1), (5, 5), (5, 6)]
        obs = orbits(pts, X, Y)
        assert obs == [[0, 1], [2, 3]]


class TestSolveRepresentation:
    def test_exact_on_cycle_free_set(self):
        pts = [(0, 0), (0, 1), (1, 1), (2, 2)]
        fvals = [Fraction(1), Fraction(2), Fraction(5), Fraction(9)]
        tables, free = solve_representation(pts, [X, Y], fvals)
        for p, v in zip(pts, fvals):
            total = tables[0][Fraction(p[0])] + tables[1][Fraction(p[1])]
            assert total == v

    def test_raises_on_cycle(self):
        with pytest.raises(CycleExists):
            solve_representation(SQUARE, [X, Y], [0, 0, 0, 1])

    @given(st.integers(0, 2**31 - 1))
    @settings(max_examples=20, deadline=None)
    def test_random_cycle_free_paths_are_solved_exactly(self, seed):
        rng = random.Random(seed)
        # build a staircase path: alternately share x then y, never closing
        pts = [(0, 0)]
        for k in range(1, 6):
            x, y = pts[-1]
            pts.append((x, y + k) if k % 2 else (x + k, y))
        fvals = [Fraction(rng.randint(-50, 50), rng.randint(1, 9))
                 for _ in pts]
        tables, _ = solve_representation(pts, [X, Y], fvals)
        for p, v in zip(pts, fvals):
            assert tables[0][Fraction(p[0])] + tables[1][Fraction(p[1])] == v
