"""Closed-form best L2 approximation by sums of r ridge functions.

The directions a^1..a^r are completed to a basis of R^n; in the image
coordinates y_i = a^i . x the admissible domains are boxes ("r-sets")
Y = Y_1 x ... x Y_r x Y_0, and the best approximant has an explicit
formula in terms of slice averages of the pulled-back function.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.integrate import simpson

from .core import (ScalarField, UnivariateTable, gauss_nodes, parse_vector,
                   rational)


class NotAnRSet(ValueError):
    pass


class RSetTransform:
    """Change of variables y = J x with J rows the directions + completion.

    ``ybox`` is the image box Y as a list of (lo, hi) per y-coordinate;
    the first r coordinates are the ridge variables.
    """

    def __init__(self, directions, completion, ybox):
        dirs = [parse_vector(d) for d in directions]
        comp = [parse_vector(d) for d in completion]
        self.r = len(dirs)
        self.n = len(dirs[0])
        rows = dirs + comp
        if any(len(v) != self.n for v in rows) or len(rows) != self.n:
            raise NotAnRSet(
                "directions plus completion must form an n x n system")
        self.J = rows
        self.detJ = _det_fraction(rows)
        if self.detJ == 0:
            raise NotAnRSet("directions plus completion are dependent")
        self.Jinv = _inv_fraction(rows, self.detJ)  # columns b^i as rows here
        ybox = [(float(lo), float(hi)) for lo, hi in ybox]
        if len(ybox) != self.n or any(lo >= hi for lo, hi in ybox):
            raise NotAnRSet("image must be a nondegenerate box Y_1 x ... x Y_n")
        self.ybox = ybox

    def x_from_y(self, *ys):
        """x = J^{-1} y, vectorized over numpy arrays."""
        ys = [np.asarray(y, dtype=float) for y in ys]
        Jinv = np.array([[float(v) for v in row] for row in self.Jinv])
        return [sum(Jinv[i][k] * ys[k] for k in range(self.n))
                for i in range(self.n)]

    def pullback(self, f):
        """f*(y) = f(x(y)) on the box Y."""
        return ScalarField(self.n, lambda *ys: f(*self.x_from_y(*ys)))

    def volumes(self):
        """(|Y|, [|Y^(j)|]_j) with Y^(j) the box omitting coordinate j."""
        widths = [hi - lo for lo, hi in self.ybox]
        total = float(np.prod(widths))
        omit = [total / w for w in widths[: self.r]]
        return total, omit


def _det_fraction(rows):
    mat = [list(map(rational, r)) for r in rows]
    n = len(mat)
    det = Fraction(1)
    for col in range(n):
        piv = next((j for j in range(col, n) if mat[j][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        mat[col] = [v * inv for v in mat[col]]
        for j in range(col + 1, n):
            if mat[j][col] != 0:
                factor = mat[j][col]
                mat[j] = [a - factor * b for a, b in zip(mat[j], mat[col])]
    return det


def _inv_fraction(rows, det):
    n = len(rows)
    aug = [list(map(rational, rows[i])) + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next(j for j in range(col, n) if aug[j][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for j in range(n):
            if j != col and aug[j][col] != 0:
                factor = aug[j][col]
                aug[j] = [a - factor * b for a, b in zip(aug[j], aug[col])]
    return [row[n:] for row in aug]


def build_rset(directions, completion, ybox):
    """Validated transform for the given directions, completion, image box."""
    return RSetTransform(directions, completion, ybox)


class L2Solution:
    """Components g_j(y_j), the L2 error, and the integral diagnostics."""

    def __init__(self, components, error, diagnostics, transform):
        self.components = components  # list of UnivariateTable in y_j
        self.error = float(error)
        self.diagnostics = diagnostics
        self.transform = transform

    def __call__(self, *xs):
        t = self.transform
        xs = [np.asarray(x, dtype=float) for x in xs]
        total = 0.0
        for j, g in enumerate(self.components):
            yj = sum(float(t.J[j][k]) * xs[k] for k in range(t.n))
            total = total + g(yj)
        return total


def _slice_average(fstar, t, j, yj_values, nodes):
    """Average of f* over Y^(j) as a function of y_j (Gauss quadrature)."""
    n = t.n
    grids, weights = [], []
    for k in range(n):
        if k == j:
            continue
        lo, hi = t.ybox[k]
        xk, wk = gauss_nodes(lo, hi, nodes)
        grids.append(xk)
        weights.append(wk)
    mesh = np.meshgrid(*grids, indexing="ij") if grids else []
    # outer product of the per-axis weight vectors
    wgrid = np.ones([len(g) for g in grids]) if grids else np.array(1.0)
    for axis, w in enumerate(weights):
        shape = [1] * len(weights)
        shape[axis] = -1
        wgrid = wgrid * w.reshape(shape)
    vol = float(np.prod([t.ybox[k][1] - t.ybox[k][0] for k in range(n) if k != j]))
    out = np.empty(len(yj_values))
    for idx, yj in enumerate(yj_values):
        args = []
        gi = 0
        for k in range(n):
            if k == j:
                args.append(np.full_like(wgrid, yj) if grids else yj)
            else:
                args.append(mesh[gi])
                gi += 1
        vals = np.asarray(fstar(*args), dtype=float)
        out[idx] = float(np.sum(vals * wgrid)) / vol if grids else float(vals)
    return out


def _box_integral(fn, box, nodes):
    grids, weights = [], []
    for lo, hi in box:
        xk, wk = gauss_nodes(lo, hi, nodes)
        grids.append(xk)
        weights.append(wk)
    mesh = np.meshgrid(*grids, indexing="ij")
    wgrid = np.ones([len(g) for g in grids])
    for axis, w in enumerate(weights):
        shape = [1] * len(weights)
        shape[axis] = -1
        wgrid = wgrid * w.reshape(shape)
    return float(np.sum(np.asarray(fn(*mesh), dtype=float) * wgrid))


def best_l2(f, t, weights=None, nodes=24, damping=0.5, max_iter=500, tol=1e-10):
    """Best L2 ridge-sum approximant over the transform's directions.

    Unweighted: direct slice-average formulas (the first component absorbs
    the mean correction).  Weighted: damped fixed-point iteration of the
    orthogonality identities; raises ArithmeticError when the iteration
    fails to settle within the budget.
    """
    fstar = t.pullback(f)
    r = t.r
    total_vol, omit_vols = t.volumes()
    table_n = 129
    knot_sets = [np.linspace(*t.ybox[j], table_n) for j in range(r)]

    A = _box_integral(fstar, t.ybox, nodes)
    slice_avgs = [_slice_average(fstar, t, j, knot_sets[j], nodes)
                  for j in range(r)]

    if weights is None:
        comps = []
        for j in range(r):
            vals = slice_avgs[j].copy()
            if j == 0:
                vals -= (r - 1) * A / total_vol
            comps.append(UnivariateTable(knot_sets[j], vals))
        err = l2_error(f, t, nodes=nodes)
        diagnostics = {
            "A": A,
            "detJ": float(t.detJ),
            "slice_averages": slice_avgs,
            "fstar_norm_sq": _box_integral(
                lambda *ys: np.asarray(fstar(*ys)) ** 2, t.ybox, nodes),
            # ||f_i*||^2 over Y, with f_i* = |Y^(i)| x slice average in y_i
            "fi_norm_sq": [
                float(omit_vols[j] ** 3
                      * simpson(slice_avgs[j] ** 2, x=knot_sets[j]))
                for j in range(r)
            ],
        }
        return L2Solution(comps, err, diagnostics, t)

    # weighted path: g_j <- (slice avg of (f* - sum_{i!=j} w_i* g_i) w_j*)
    #                       / (slice avg of w_j*^2), damped
    wstars = [t.pullback(w) for w in weights]
    comps = [np.zeros(table_n) for _ in range(r)]

    def component_field(vals):
        return [UnivariateTable(knot_sets[j], vals[j]) for j in range(r)]

    for it in range(max_iter):
        delta = 0.0
        for j in range(r):
            tabs = component_field(comps)

            def resid_times_wj(*ys):
                acc = np.asarray(fstar(*ys), dtype=float).copy()
                for i in range(r):
                    if i != j:
                        acc = acc - np.asarray(wstars[i](*ys)) * tabs[i](ys[i])
                return acc * np.asarray(wstars[j](*ys))

            num = _slice_average(ScalarField(t.n, resid_times_wj), t, j,
                                 knot_sets[j], nodes)
            den = _slice_average(
                ScalarField(t.n, lambda *ys: np.asarray(wstars[j](*ys)) ** 2),
                t, j, knot_sets[j], nodes)
            new = num / den
            step = damping * (new - comps[j])
            delta = max(delta, float(np.max(np.abs(step))))
            comps[j] = comps[j] + step
        if delta < tol:
            break
    else:
        raise ArithmeticError(
            f"weighted iteration did not settle (last change {delta:.3e})")

    tabs = component_field(comps)

    def resid_sq(*xs):
        acc = np.asarray(f(*xs), dtype=float).copy()
        for i in range(r):
            yi = sum(float(t.J[i][k]) * np.asarray(xs[k]) for k in range(t.n))
            acc = acc - np.asarray(weights[i](*xs)) * tabs[i](yi)
        return acc**2

    # residual norm back in x-coordinates via the y-box and Jacobian
    err_sq = _box_integral(
        lambda *ys: np.asarray(t.pullback(ScalarField(t.n, resid_sq))(*ys)),
        t.ybox, nodes) / abs(float(t.detJ))
    diagnostics = {"A": A, "detJ": float(t.detJ), "iterations": it + 1}
    return L2Solution(tabs, max(err_sq, 0.0) ** 0.5, diagnostics, t)


def l2_error(f, t, nodes=24):
    """Closed-form L2 distance from f to the ridge-sum space.

    E^2 * |detJ| = ||f*||^2 - sum_j ||fbar_j||^2 / |Y^(j)|^2 + (r-1) A^2 / |Y|
    where fbar_j(y_j) = integral of f* over Y^(j) and the middle norms are
    over all of Y.
    """
    fstar = t.pullback(f)
    r = t.r
    total_vol, omit_vols = t.volumes()
    A = _box_integral(fstar, t.ybox, nodes)
    norm_sq = _box_integral(lambda *ys: np.asarray(fstar(*ys)) ** 2,
                            t.ybox, nodes)
    radicand = norm_sq + (r - 1) * A**2 / total_vol
    for j in range(r):
        lo, hi = t.ybox[j]
        yj, wj = gauss_nodes(lo, hi, nodes)
        fbar = _slice_average(fstar, t, j, yj, nodes) * omit_vols[j]
        radicand -= float(np.sum(fbar**2 * wj)) / omit_vols[j]
    if radicand < -1e-12:
        raise ArithmeticError(
            f"negative radicand {radicand:.3e}: quadrature failure")
    return (max(radicand, 0.0) / abs(float(t.detJ))) ** 0.5
