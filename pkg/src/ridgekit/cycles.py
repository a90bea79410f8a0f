"""Cycle, path and orbit machinery on finite point sets.

A finite set of points admits a *cycle* with respect to functions
h_1..h_r when nonzero weights can be attached to (a subset of) the points
so that, for every i, the weights sum to zero on each level set (fiber) of
h_i.  Cycles are exactly the obstruction to writing data on the points as a
sum g_1(h_1(x)) + ... + g_r(h_r(x)).  All fiber comparisons are exact over
the rationals.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

from .core import PointConfig, dot, rational


class CycleExists(ValueError):
    """Raised when a representation is requested on a configuration that
    carries a cycle; the offending certificate is attached."""

    def __init__(self, certificate):
        super().__init__("configuration contains a cycle")
        self.certificate = certificate


class CycleCertificate:
    """Integer weights on a support, summing to zero on every fiber."""

    def __init__(self, support, weights, points=None):
        self.support = list(support)
        self.weights = [int(w) for w in weights]
        self.points = None if points is None else list(points)
        if len(self.support) != len(self.weights):
            raise ValueError("support and weights must have equal length")
        if any(w == 0 for w in self.weights):
            raise ValueError("all certificate weights must be nonzero")

    def normalized_weights(self):
        """Weights scaled so that sum |w| = 1 (exact rationals)."""
        total = sum(abs(w) for w in self.weights)
        return [Fraction(w, total) for w in self.weights]

    def __repr__(self):
        return f"CycleCertificate(support={self.support}, weights={self.weights})"


def _apply(h, p):
    """Evaluate a direction (vector) or callable at a point, exactly."""
    if callable(h):
        return rational(h(p))
    return dot(h, p)


def fiberize(points, h):
    """Partition point indices into fibers of each h_i (exact equality).

    Returns a list (one entry per h_i) of dicts value -> sorted index list.
    """
    maps = []
    for hi in h:
        fib = {}
        for j, p in enumerate(points):
            fib.setdefault(_apply(hi, p), []).append(j)
        maps.append(fib)
    return maps


def _incidence_rows(points, h, subset=None):
    """Rows of the fiber incidence system restricted to ``subset`` indices.

    Row (i, fiber value) has entry 1 at each member point; a weight vector
    lies in the nullspace iff it sums to zero on every fiber of every h_i.
    """
    idx = list(range(len(points))) if subset is None else list(subset)
    pts = list(points)
    rows = []
    for hi in h:
        fib = {}
        for col, j in enumerate(idx):
            fib.setdefault(_apply(hi, pts[j]), []).append(col)
        for members in fib.values():
            row = [Fraction(0)] * len(idx)
            for col in members:
                row[col] = Fraction(1)
            rows.append(row)
    return rows, idx


def rational_nullspace(rows, ncols):
    """Basis of the nullspace of a rational matrix, by exact elimination."""
    mat = [list(map(Fraction, r)) for r in rows]
    pivots = {}  # col -> row index
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(mat)):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pr = mat[rank]
        inv = 1 / pr[col]
        mat[rank] = [v * inv for v in pr]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[rank])]
        pivots[col] = rank
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for col, r in pivots.items():
            vec[col] = -mat[r][fc]
        basis.append(vec)
    return basis


def integerize(vec):
    """Clear denominators and divide by the gcd; sign: first nonzero > 0."""
    den = 1
    for v in vec:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-u for u in ints]
            break
    return ints


def _canonical_cycle_vector(basis):
    """Deterministic representative of the cycle space.

    Searches small integer combinations of the basis for the vector with
    the widest support, then the smallest total weight, then the
    lexicographically greatest entries.  Falls back to the first basis
    vector when the space is too large to enumerate.
    """
    ints = [integerize(b) for b in basis]
    if len(ints) == 1 or len(ints) > 4:
        return ints[0]
    best_key = None
    best_vec = None
    for coeffs in itertools.product(range(-4, 5), repeat=len(ints)):
        if all(c == 0 for c in coeffs):
            continue
        vec = [sum(c * b[i] for c, b in zip(coeffs, ints))
               for i in range(len(ints[0]))]
        vec = integerize([Fraction(v) for v in vec])
        support = sum(1 for v in vec if v != 0)
        l1 = sum(abs(v) for v in vec)
        key = (support, -l1, vec)
        if best_key is None or key > best_key:
            best_key, best_vec = key, vec
    return best_vec


def has_cycle(points, h, certificate=True):
    """Decide whether the configuration carries a cycle.

    Returns (False, None) or (True, CycleCertificate) built from a
    canonical nullspace vector of the fiber incidence system.
    """
    pts = list(points)
    rows, idx = _incidence_rows(pts, h)
    basis = rational_nullspace(rows, len(idx))
    if not basis:
        return (False, None) if certificate else False
    if not certificate:
        return True
    vec = _canonical_cycle_vector(basis)
    support = [idx[j] for j, w in enumerate(vec) if w != 0]
    weights = [w for w in vec if w != 0]
    return True, CycleCertificate(support, weights, pts)


def _subset_is_taut(points, h, subset):
    """Necessary condition for a full-support cycle: no point of the subset
    sits alone in any of its fibers (else its weight is forced to zero)."""
    pts = list(points)
    for hi in h:
        fib = {}
        for j in subset:
            fib.setdefault(_apply(hi, pts[j]), []).append(j)
        for members in fib.values():
            if len(members) == 1:
                return False
    return True


def minimal_cycles(points, h, cap=10):
    """All support-minimal cycles with support size <= cap.

    Breadth-first over support sizes; a subset is skipped when some point
    has a singleton fiber (no full-support weights exist) or when it
    strictly contains an already-found minimal support.  For each minimal
    support the weight vector is unique up to scale; it is reported in
    smallest integers, first weight positive.

    Returns (certificates, exhausted); ``exhausted`` is False when the cap
    cut the enumeration before all subsets were inspected.
    """
    pts = list(points)
    n = len(pts)
    found = []
    supports = []
    exhausted = cap >= n
    for size in range(2, min(cap, n) + 1):
        for subset in itertools.combinations(range(n), size):
            if any(s <= set(subset) for s in supports):
                continue
            if not _subset_is_taut(pts, h, subset):
                continue
            rows, idx = _incidence_rows(pts, h, subset)
            basis = rational_nullspace(rows, len(idx))
            if not basis:
                continue
            vec = integerize(basis[0])
            if any(w == 0 for w in vec):
                continue  # support smaller than subset; found at its own size
            supports.append(set(subset))
            found.append(CycleCertificate(list(subset), vec, pts))
    found.sort(key=lambda c: c.support)
    return found, exhausted


def cycle_functional(cert, f, points=None):
    """G(f) = sum lambda_j f(x_j) with weights normalized to sum|lambda|=1.

    Vanishes on every sum of the form g_1(h_1(x)) + ... + g_r(h_r(x)).
    """
    pts = list(points) if points is not None else cert.points
    if pts is None:
        raise ValueError("certificate carries no points; pass them explicitly")
    lam = cert.normalized_weights()
    total = 0.0
    for w, j in zip(lam, cert.support):
        total += float(w) * float(f(*[float(c) for c in pts[j]]))
    return total


def tau_closure(points, directions):
    """Iterate Z -> intersection over i of {x in Z : x's i-fiber within Z
    has >= 2 members} until a fixed point (or the empty set).

    Returns (trace, fixed_point) where trace is the list of index sets
    visited, starting with the full set.  Emptiness of the fixed point is a
    sufficient condition for the configuration to be cycle-free; the
    converse fails.
    """
    pts = list(points)
    current = set(range(len(pts)))
    trace = [sorted(current)]
    while current:
        nxt = set(current)
        for a in directions:
            fib = {}
            for j in current:
                fib.setdefault(_apply(a, pts[j]), []).append(j)
            keep = set()
            for members in fib.values():
                if len(members) >= 2:
                    keep.update(members)
            nxt &= keep
        if nxt == current:
            break
        current = nxt
        trace.append(sorted(current))
    return trace, sorted(current)


# ---------------------------------------------------------------------------
# paths and orbits (two directions)

def _fiber_keys(points, a):
    return [dot(a, p) for p in points]


def closed_path_search(points, a1, a2):
    """Find a closed path: distinct points p_1..p_{2n} alternating along
    level lines of a1 and a2 (wrapping around).  Returns the list of point
    indices or None.

    Points are edges of the bipartite multigraph whose sides are the
    a1-fibers and a2-fibers; closed paths correspond to cycles there.
    """
    pts = list(points)
    k1 = _fiber_keys(pts, a1)
    k2 = _fiber_keys(pts, a2)
    f1 = {}  # fiber value -> node id (side 1)
    f2 = {}
    for v in k1:
        f1.setdefault(v, ("u", len(f1)))
    for v in k2:
        f2.setdefault(v, ("v", len(f2)))
    adj = {}
    for j in range(len(pts)):
        u, v = f1[k1[j]], f2[k2[j]]
        adj.setdefault(u, []).append((v, j))
        adj.setdefault(v, []).append((u, j))
    # DFS over fiber nodes; a back edge closes a cycle whose edges are the
    # sought points (distinct edges <=> distinct points, since two distinct
    # points cannot share both fibers of independent directions)
    visited = set()
    for start in adj:
        if start in visited:
            continue
        # recursive DFS via explicit stack, keeping the current edge path
        stack = [(start, None, iter(adj[start]))]
        on_path = {start: None}  # node -> edge used to enter it
        visited.add(start)
        while stack:
            node, in_edge, it = stack[-1]
            advanced = False
            for (nbr, edge) in it:
                if edge == in_edge:
                    continue
                if nbr in on_path:
                    # unwind the stack back to nbr, collecting edges
                    cyc = [edge]
                    k = len(stack) - 1
                    while stack[k][0] != nbr:
                        cyc.append(stack[k][1])
                        k -= 1
                    cyc.reverse()
                    return cyc
                if nbr not in visited:
                    visited.add(nbr)
                    on_path[nbr] = edge
                    stack.append((nbr, edge, iter(adj[nbr])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                del on_path[node]
    return None


def orbits(points, a1, a2):
    """Partition point indices into orbits: equivalence classes of the
    relation generated by sharing an a1-fiber or an a2-fiber (union-find)."""
    pts = list(points)
    parent = list(range(len(pts)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for a in (a1, a2):
        fib = {}
        for j, p in enumerate(pts):
            fib.setdefault(dot(a, p), []).append(j)
        for members in fib.values():
            for j in members[1:]:
                union(members[0], j)
    groups = {}
    for j in range(len(pts)):
        groups.setdefault(find(j), []).append(j)
    return sorted(groups.values())


# ---------------------------------------------------------------------------
# representation solver

def solve_representation(points, h, f_values, anchor=0, anchor_values=None):
    """Solve sum_i g_i(h_i(x_j)) = f(x_j) exactly on the configuration.

    Anchoring: g_i(h_i(x_anchor)) = anchor_values[i] for i = 1..r-1 (the
    last function absorbs the constant).  Requires a cycle-free
    configuration; raises CycleExists otherwise.  Unknowns untouched by the
    equations (isolated fibers of a disconnected block) get the canonical
    value 0 and are reported.

    Returns (tables, free_count) where tables[i] is a dict fiber-value ->
    Fraction.
    """
    pts = list(points)
    n = len(pts)
    r = len(h)
    ok, cert = has_cycle(pts, h)
    if ok:
        raise CycleExists(cert)
    vals = [rational(v) for v in f_values]
    if len(vals) != n:
        raise ValueError("need one f value per point")
    if anchor_values is None:
        anchor_values = [Fraction(0)] * (r - 1)
    anchor_values = [rational(v) for v in anchor_values]
    if len(anchor_values) != r - 1:
        raise ValueError("need r-1 anchor values")

    # unknown columns: one per (i, fiber value)
    col_of = {}
    keys = []
    for i, hi in enumerate(h):
        for p in pts:
            key = (i, _apply(hi, p))
            if key not in col_of:
                col_of[key] = len(keys)
                keys.append(key)
    m = len(keys)
    rows, rhs = [], []
    for j, p in enumerate(pts):
        row = [Fraction(0)] * m
        for i, hi in enumerate(h):
            row[col_of[(i, _apply(hi, p))]] += 1
        rows.append(row)
        rhs.append(vals[j])
    for i in range(r - 1):
        row = [Fraction(0)] * m
        row[col_of[(i, _apply(h[i], pts[anchor]))]] = Fraction(1)
        rows.append(row)
        rhs.append(anchor_values[i])

    # exact Gauss elimination with back substitution; free unknowns -> 0
    aug = [row + [b] for row, b in zip(rows, rhs)]
    pivots = {}
    rank = 0
    for col in range(m):
        piv = next((j for j in range(rank, len(aug)) if aug[j][col] != 0), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = 1 / aug[rank][col]
        aug[rank] = [v * inv for v in aug[rank]]
        for j in range(len(aug)):
            if j != rank and aug[j][col] != 0:
                factor = aug[j][col]
                aug[j] = [a - factor * b for a, b in zip(aug[j], aug[rank])]
        pivots[col] = rank
        rank += 1
    for j in range(rank, len(aug)):
        if aug[j][m] != 0:
            raise ArithmeticError("inconsistent system on a cycle-free set")

    solution = [Fraction(0)] * m
    for col, j in pivots.items():
        solution[col] = aug[j][m]  # free columns are zero, so row value is it
    free_count = m - rank
    tables = [dict() for _ in range(r)]
    for (i, value), col in col_of.items():
        tables[i][value] = solution[col]
    return tables, free_count
