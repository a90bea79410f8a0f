"""Shared exact arithmetic, expression parsing, grids, quadrature and
evaluable-function abstractions.

Exact rationals (``fractions.Fraction``) back everything combinatorial:
deciding whether two points lie on the same level line of a direction is
ill-posed in floating point, so all fiber logic upstream works over Q.
Approximation numerics (quadrature, LP oracles) use IEEE doubles.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog


# ---------------------------------------------------------------------------
# exact rationals

def rational(value):
    """Convert a string ("3/4", "0.25"), int, float or Fraction to an exact
    Fraction.  Decimal strings and floats are converted exactly (no rounding
    beyond what the literal itself carries)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(s)  # handles decimal literals exactly
    raise TypeError(f"cannot convert {value!r} to a rational")


def parse_vector(value):
    """Rational tuple from a comma/space separated string or a sequence."""
    if isinstance(value, str):
        parts = value.replace(",", " ").split()
        return tuple(rational(p) for p in parts)
    return tuple(rational(p) for p in value)


# ---------------------------------------------------------------------------
# point sets and directions

class PointConfig:
    """A finite ordered set of points with exact rational coordinates."""

    def __init__(self, dim, points):
        self.dim = int(dim)
        if self.dim < 1:
            raise ValueError("dim must be positive")
        pts = []
        for p in points:
            q = tuple(rational(c) for c in p)
            if len(q) != self.dim:
                raise ValueError(f"point {p} does not have dimension {self.dim}")
            pts.append(q)
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        self.points = pts

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def as_array(self):
        return np.array([[float(c) for c in p] for p in self.points])

    @classmethod
    def from_csv(cls, path, dim=None):
        rows = _read_csv_rows(path)
        d = dim if dim is not None else len(rows[0])
        return cls(d, rows)


class DirectionSet:
    """Nonzero, pairwise linearly independent directions (rational entries)."""

    def __init__(self, dim, directions):
        self.dim = int(dim)
        dirs = []
        for a in directions:
            v = tuple(rational(c) for c in a)
            if len(v) != self.dim:
                raise ValueError(f"direction {a} does not have dimension {self.dim}")
            if all(c == 0 for c in v):
                raise ValueError("zero direction not allowed")
            dirs.append(v)
        for i in range(len(dirs)):
            for j in range(i + 1, len(dirs)):
                if _parallel(dirs[i], dirs[j]):
                    raise ValueError(
                        f"directions {i} and {j} are linearly dependent")
        self.directions = dirs

    def __len__(self):
        return len(self.directions)

    def __iter__(self):
        return iter(self.directions)

    @classmethod
    def from_csv(cls, path, dim=None):
        rows = _read_csv_rows(path)
        d = dim if dim is not None else len(rows[0])
        return cls(d, rows)


def _parallel(u, v):
    """True iff u and v are linearly dependent (both nonzero assumed)."""
    # cross-ratio test over Q: u[i]*v[j] == u[j]*v[i] for all pairs
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            if u[i] * v[j] != u[j] * v[i]:
                return False
    return True


def dot(a, x):
    """Exact dot product of rational sequences."""
    return sum(ai * xi for ai, xi in zip(a, x))


def _read_csv_rows(path):
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#")[0].strip()
            if not line:
                continue
            rows.append(parse_vector(line))
    if not rows:
        raise ValueError(f"no data rows in {path}")
    return rows


# ---------------------------------------------------------------------------
# expression parsing
#
# expr   := term (('+'|'-') term)*
# term   := factor (('*'|'/') factor)*
# factor := ('-')? base ('^' factor)?
# base   := number | ident | func '(' expr ')' | '(' expr ')'
# ident  := 'x' digit+ | 'pi' | 'e'
#                            func in {sin, cos, exp, log, abs, sqrt}

_FUNCS = {
    "sin": np.sin, "cos": np.cos, "exp": np.exp,
    "log": np.log, "abs": np.abs, "sqrt": np.sqrt,
}

_CONSTS = {"pi": math.pi, "e": math.e}


class ExprError(ValueError):
    """Syntax or semantic error in an expression, with position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class _Tokenizer:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.tokens = []
        self._scan()
        self.i = 0

    def _scan(self):
        t, n = self.text, len(self.text)
        i = 0
        while i < n:
            c = t[i]
            if c.isspace():
                i += 1
                continue
            if c in "+-*/^()":
                self.tokens.append((c, c, i))
                i += 1
                continue
            if c.isdigit() or c == ".":
                j = i
                while j < n and (t[j].isdigit() or t[j] == "."):
                    j += 1
                self.tokens.append(("num", t[i:j], i))
                i = j
                continue
            if c.isalpha():
                j = i
                while j < n and t[j].isalnum():
                    j += 1
                self.tokens.append(("name", t[i:j], i))
                i = j
                continue
            raise ExprError(f"unexpected character {c!r}", i)
        self.tokens.append(("end", "", n))

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok


class _Parser:
    def __init__(self, text, dim):
        self.tz = _Tokenizer(text)
        self.dim = dim

    def parse(self):
        node = self.expr()
        kind, val, pos = self.tz.peek()
        if kind != "end":
            raise ExprError(f"unexpected token {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.tz.peek()[0] in "+-":
            op = self.tz.next()[0]
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tz.peek()[0] in "*/":
            op = self.tz.next()[0]
            node = (op, node, self.factor())
        return node

    def factor(self):
        if self.tz.peek()[0] == "-":
            self.tz.next()
            return ("neg", self.factor())
        node = self.base()
        if self.tz.peek()[0] == "^":
            self.tz.next()
            node = ("^", node, self.factor())
        return node

    def base(self):
        kind, val, pos = self.tz.next()
        if kind == "num":
            try:
                return ("const", float(Fraction(val)))
            except ValueError:
                raise ExprError(f"bad number {val!r}", pos)
        if kind == "name":
            if val.startswith("x") and val[1:].isdigit():
                k = int(val[1:])
                if not 1 <= k <= self.dim:
                    raise ExprError(f"variable {val} out of range 1..{self.dim}", pos)
                return ("var", k - 1)
            if val in _CONSTS:
                return ("const", _CONSTS[val])
            if val in _FUNCS:
                kind2, val2, pos2 = self.tz.next()
                if kind2 != "(":
                    raise ExprError(f"expected '(' after {val}", pos2)
                arg = self.expr()
                kind3, val3, pos3 = self.tz.next()
                if kind3 != ")":
                    raise ExprError("expected ')'", pos3)
                return ("call", val, arg)
            raise ExprError(f"unknown identifier {val!r}", pos)
        if kind == "(":
            node = self.expr()
            kind2, _, pos2 = self.tz.next()
            if kind2 != ")":
                raise ExprError("expected ')'", pos2)
            return node
        raise ExprError(f"unexpected token {val!r}", pos)


def _eval_ast(node, xs):
    op = node[0]
    if op == "const":
        return node[1]
    if op == "var":
        return xs[node[1]]
    if op == "neg":
        return -_eval_ast(node[1], xs)
    if op == "call":
        return _FUNCS[node[1]](_eval_ast(node[2], xs))
    a = _eval_ast(node[1], xs)
    b = _eval_ast(node[2], xs)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    if op == "^":
        return a ** b
    raise AssertionError(op)


def format_ast(node):
    """Pretty-print an AST back to the grammar (parse(format(ast)) == ast)."""
    op = node[0]
    if op == "const":
        v = node[1]
        return repr(v)
    if op == "var":
        return f"x{node[1] + 1}"
    if op == "neg":
        return f"(-{format_ast(node[1])})"
    if op == "call":
        return f"{node[1]}({format_ast(node[2])})"
    return f"({format_ast(node[1])}{op}{format_ast(node[2])})"


class ScalarField:
    """An evaluable d-variate function: parsed expression, wrapped callable,
    or sampled grid with multilinear interpolation."""

    def __init__(self, dim, fn, ast=None):
        self.dim = int(dim)
        self._fn = fn
        self.ast = ast

    def __call__(self, *xs):
        """Evaluate; accepts d scalars or d numpy arrays, or one point."""
        if len(xs) == 1 and self.dim != 1:
            xs = tuple(xs[0])
        if len(xs) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(xs)}")
        xs = tuple(float(x) if isinstance(x, Fraction) else x for x in xs)
        return self._fn(*xs)

    @classmethod
    def from_expression(cls, text, dim):
        ast = _Parser(text, dim).parse()
        return cls(dim, lambda *xs: _eval_ast(ast, xs), ast=ast)

    @classmethod
    def from_callable(cls, fn, dim):
        return cls(dim, fn)

    @classmethod
    def from_grid(cls, axes, values):
        """Sampled tensor grid with multilinear interpolation."""
        from scipy.interpolate import RegularGridInterpolator
        interp = RegularGridInterpolator(
            [np.asarray(a, float) for a in axes], np.asarray(values, float),
            method="linear")
        dim = len(axes)

        def fn(*xs):
            pts = np.broadcast_arrays(*[np.asarray(x, float) for x in xs])
            flat = np.stack([p.ravel() for p in pts], axis=-1)
            out = interp(flat)
            return out.reshape(pts[0].shape) if pts[0].shape else float(out[0])

        return cls(dim, fn)

    def to_sympy(self):
        """Convert an AST-backed field to a sympy expression in x1..xd."""
        import sympy as sp
        if self.ast is None:
            raise ValueError("only expression-backed fields convert to sympy")
        syms = sp.symbols(f"x1:{self.dim + 1}")
        funcs = {"sin": sp.sin, "cos": sp.cos, "exp": sp.exp,
                 "log": sp.log, "abs": sp.Abs, "sqrt": sp.sqrt}

        def conv(node):
            op = node[0]
            if op == "const":
                return sp.nsimplify(sp.Rational(Fraction(node[1]).limit_denominator(10**12)))
            if op == "var":
                return syms[node[1]]
            if op == "neg":
                return -conv(node[1])
            if op == "call":
                return funcs[node[1]](conv(node[2]))
            a, b = conv(node[1]), conv(node[2])
            return {"+": a + b, "-": a - b, "*": a * b,
                    "/": a / b, "^": a ** b}[op]

        return conv(self.ast), syms


def parse_expression(text, dim):
    """Parse ``text`` over variables x1..xd into an evaluable ScalarField."""
    return ScalarField.from_expression(text, dim)


# ---------------------------------------------------------------------------
# univariate tables and ridge sums

class UnivariateTable:
    """Piecewise-linear univariate function on strictly increasing knots."""

    def __init__(self, knots, values):
        self.knots = np.asarray(knots, float)
        self.values = np.asarray(values, float)
        if self.knots.ndim != 1 or self.knots.shape != self.values.shape:
            raise ValueError("knots and values must be 1-d and equal length")
        if not np.all(np.diff(self.knots) > 0):
            raise ValueError("knots must be strictly increasing")

    def __call__(self, t):
        t = np.asarray(t, float)
        lo, hi = self.knots[0], self.knots[-1]
        eps = 1e-9 * (1.0 + hi - lo)
        if np.any(t < lo - eps) or np.any(t > hi + eps):
            raise ValueError("evaluation outside table range")
        out = np.interp(np.clip(t, lo, hi), self.knots, self.values)
        return float(out) if out.ndim == 0 else out

    @classmethod
    def sample(cls, fn, lo, hi, n=201):
        ts = np.linspace(float(lo), float(hi), n)
        return cls(ts, np.array([float(fn(t)) for t in ts]))


class RidgeSum:
    """A sum of ridge terms g_i(a_i . x)."""

    def __init__(self, terms, dim=None):
        self.terms = []
        for a, g in terms:
            v = tuple(rational(c) for c in a)
            if all(c == 0 for c in v):
                raise ValueError("zero direction in ridge term")
            self.terms.append((v, g))
        self.dim = dim if dim is not None else len(self.terms[0][0])

    def __call__(self, *xs):
        if len(xs) == 1 and self.dim != 1:
            xs = tuple(xs[0])
        xs = [np.asarray(float(x) if isinstance(x, Fraction) else x) for x in xs]
        total = 0.0
        for a, g in self.terms:
            arg = sum(float(ai) * xi for ai, xi in zip(a, xs))
            total = total + g(arg)
        return total

    def as_field(self):
        return ScalarField(self.dim, self.__call__)


# ---------------------------------------------------------------------------
# quadrature

def gauss_nodes(lo, hi, n):
    """Gauss-Legendre nodes and weights on [lo, hi]."""
    x, w = np.polynomial.legendre.leggauss(int(n))
    lo, hi = float(lo), float(hi)
    return 0.5 * (hi - lo) * x + 0.5 * (hi + lo), 0.5 * (hi - lo) * w


def tensor_quadrature(f, box, nodes_per_axis):
    """Tensor Gauss-Legendre approximation of the integral of f over a box.

    Exact (to rounding) for polynomials of degree <= 2*nodes-1 per axis;
    deterministic for fixed inputs.
    """
    if nodes_per_axis < 2:
        raise ValueError("nodes_per_axis must be >= 2")
    axes, weights = [], []
    for lo, hi in box:
        if not float(lo) < float(hi):
            raise ValueError("box bounds must satisfy lo < hi")
        x, w = gauss_nodes(lo, hi, nodes_per_axis)
        axes.append(x)
        weights.append(w)
    grids = np.meshgrid(*axes, indexing="ij")
    vals = np.asarray(f(*grids), float)
    wgrid = weights[0]
    for w in weights[1:]:
        wgrid = np.multiply.outer(wgrid, w)
    return float(np.sum(vals * wgrid))


# ---------------------------------------------------------------------------
# grid minimax LP oracle

def grid_minimax_oracle(f, directions, grid, return_tables=False):
    """Exact discrete minimax error min_g max_{x in grid} |f(x) - sum g_i(a_i.x)|
    over ridge sums with the given directions, as a linear program.

    One variable per distinct fiber value per direction plus the error
    variable; fibers are grouped by exact rational comparison of a.x.
    """
    pts = list(grid)
    n = len(pts)
    # fiber values per direction, grouped exactly over Q
    var_index = {}  # (i_dir, fiber_value) -> column
    cols = []
    for i, a in enumerate(directions):
        for p in pts:
            key = (i, dot(a, p))
            if key not in var_index:
                var_index[key] = len(cols)
                cols.append(key)
    m = len(cols)
    # variables: [g_0 ... g_{m-1}, t]; minimize t
    # constraints: sum_i g_{fiber_i(x)} - t <= f(x) and -sum - t <= -f(x)
    A = np.zeros((2 * n, m + 1))
    b = np.zeros(2 * n)
    for j, p in enumerate(pts):
        fx = float(f(*[float(c) for c in p]))
        for i, a in enumerate(directions):
            col = var_index[(i, dot(a, p))]
            A[2 * j, col] += 1.0
            A[2 * j + 1, col] -= 1.0
        A[2 * j, m] = -1.0
        A[2 * j + 1, m] = -1.0
        b[2 * j] = fx
        b[2 * j + 1] = -fx
    c = np.zeros(m + 1)
    c[m] = 1.0
    res = linprog(c, A_ub=A, b_ub=b,
                  bounds=[(None, None)] * m + [(0, None)], method="highs")
    if not res.success:
        raise RuntimeError(f"minimax LP failed: {res.message}")
    if return_tables:
        tables = []
        for i, a in enumerate(directions):
            fib = sorted({dot(a, p) for p in pts})
            knots = [float(v) for v in fib]
            vals = [res.x[var_index[(i, v)]] for v in fib]
            tables.append((knots, vals))
        return float(res.fun), tables
    return float(res.fun)
