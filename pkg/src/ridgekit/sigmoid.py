"""A smooth universal sigmoidal activation and a two-neuron fitter.

The activation sigma(.; d, lambda) is built segment by segment: on the
n-th segment [(2n-1)d, 2nd] it traces the n-th monic polynomial with
rational coefficients (enumerated through the Calkin-Wilf sequence),
squeezed into a thin horizontal strip below 1; smooth bump transitions
join the segments.  Any continuous function on [a, b] can then be
approximated to accuracy eps by c1*sigma(x - t1) + c2*sigma(x - t2) with
suitable weights and (astronomically large, exactly represented) shifts.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .core import rational

_LN2 = math.log(2.0)


# ---------------------------------------------------------------------------
# Calkin-Wilf sequence and the monic-polynomial enumeration

def _ln_big(n):
    """log of a positive int of arbitrary size, accurate to ~1e-15."""
    if n.bit_length() <= 52:
        return math.log(n)
    shift = n.bit_length() - 53
    return math.log(n >> shift) + shift * _LN2


def calkin_wilf(n):
    """n-th term (1-based) of the Calkin-Wilf enumeration of the positive
    rationals, computed from the binary run lengths of n (no iteration)."""
    n = int(n)
    if n < 1:
        raise ValueError("index must be >= 1")
    # run lengths of n's binary digits, least significant first, starting
    # with the (possibly empty) run of ones, give the continued fraction
    runs = []
    bit = n & 1
    if bit == 0:
        runs.append(0)
    while n:
        cur = n & 1
        count = 0
        while n and (n & 1) == cur:
            n >>= 1
            count += 1
        runs.append(count)
        cur ^= 1
    # evaluate [runs[0]; runs[1], runs[2], ...]
    value = Fraction(runs[-1])
    for term in reversed(runs[:-1]):
        value = term + 1 / value
    return value


def _continued_fraction(q):
    """Canonical continued fraction of q > 0: [c0; c1, ..., ck] with middle
    terms >= 1 and the last term >= 2 unless the expansion is just [c0]."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("need a positive rational")
    terms = []
    num, den = q.numerator, q.denominator
    while den:
        terms.append(num // den)
        num, den = den, num % den
    # make it canonical: a trailing 1 merges into the previous term
    if len(terms) > 1 and terms[-1] == 1:
        terms.pop()
        terms[-1] += 1
    return terms


def cw_index(q, max_bits=300_000_000):
    """Position of the positive rational q in the Calkin-Wilf sequence."""
    terms = _continued_fraction(q)
    if sum(terms) > max_bits:
        raise OverflowError(
            "Calkin-Wilf index would exceed the bit budget")
    if len(terms) % 2 == 0:
        # need an odd number of run lengths (the leading binary run is
        # always ones); split the final term
        terms[-1] -= 1
        terms.append(1)
    # binary digits: terms[-1] ones, then terms[-2] zeros, ... down to
    # terms[0] ones at the least significant end
    n = 0
    ones = True
    for term in reversed(terms):
        n <<= term
        if ones:
            n |= (1 << term) - 1
        ones = not ones
    return n


def rational_enum(k):
    """Enumeration of all rationals: 0, q1, -q1, q2, -q2, ... re-indexed as
    r_0 = 0, r_{2n} = q_n, r_{2n-1} = -q_n."""
    k = int(k)
    if k < 0:
        raise ValueError("index must be >= 0")
    if k == 0:
        return Fraction(0)
    return calkin_wilf(k // 2) if k % 2 == 0 else -calkin_wilf((k + 1) // 2)


def rational_index(r):
    """Inverse of rational_enum."""
    r = rational(r)
    if r == 0:
        return 0
    n = cw_index(abs(r))
    return 2 * n if r > 0 else 2 * n - 1


class MonicPoly:
    """Monic polynomial with exact rational coefficients.

    ``coeffs`` lists a_0 .. a_{l-1}; the leading coefficient 1 of x^l is
    implicit.  Degree 0 means the constant polynomial 1.
    """

    def __init__(self, coeffs):
        self.coeffs = tuple(rational(c) for c in coeffs)

    @property
    def degree(self):
        return len(self.coeffs)

    def all_coeffs(self):
        return self.coeffs + (Fraction(1),)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        acc = np.ones_like(t)
        for c in reversed(self.coeffs):
            acc = acc * t + float(c)
        return acc

    def __eq__(self, other):
        return isinstance(other, MonicPoly) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"MonicPoly({list(self.coeffs)})"

    def derivative_bound(self, radius=1.5):
        """Upper bound for |p'| on (0, radius)."""
        lead = self.degree * radius ** max(self.degree - 1, 0) \
            if self.degree else 0.0
        return sum(i * abs(float(c)) * radius ** (i - 1)
                   for i, c in enumerate(self.coeffs) if i) + lead


def monic_enum(n):
    """n-th monic polynomial with rational coefficients (1-based).

    The sequence starts 1, x^2, x, x^2-x, x^2-1, x^3, x-1, x^2+x, ...; the
    continued fraction of the n-th Calkin-Wilf rational encodes degree and
    coefficient indices in the signed-rational enumeration.
    """
    n = int(n)
    if n < 1:
        raise ValueError("index must be >= 1")
    if n == 1:
        return MonicPoly([])
    q = calkin_wilf(n)
    terms = _continued_fraction(q)
    if len(terms) == 1:
        return MonicPoly([rational_enum(terms[0] - 2)])       # degree 1
    if len(terms) == 2:
        return MonicPoly([rational_enum(terms[0]),
                          rational_enum(terms[1] - 2)])       # degree 2
    ks = [terms[0]] + [t - 1 for t in terms[1:-1]] + [terms[-1] - 2]
    return MonicPoly([rational_enum(k) for k in ks])


def monic_index(p):
    """Inverse of monic_enum (arbitrary precision; no iteration)."""
    if not isinstance(p, MonicPoly):
        p = MonicPoly(p)
    coeffs = p.coeffs
    if p.degree == 0:
        return 1
    ks = [rational_index(c) for c in coeffs]
    if p.degree == 1:
        q = Fraction(ks[0] + 2)
        if q < 1:
            raise ValueError("polynomial is outside the enumeration")
        return cw_index(q)
    if p.degree == 2:
        terms = [ks[0], ks[1] + 2]
    else:
        terms = [ks[0]] + [k + 1 for k in ks[1:-1]] + [ks[-1] + 2]
    # continued fraction -> rational -> index
    value = Fraction(terms[-1])
    for term in reversed(terms[:-1]):
        value = term + 1 / value
    return cw_index(value)


# ---------------------------------------------------------------------------
# the activation

class SigmoidParams:
    def __init__(self, d, lam):
        if not (d > 0 and lam > 0):
            raise ValueError("need d > 0 and lambda > 0")
        self.d = float(d)
        self.lam = float(lam)
        self.lam_eff = min(0.5, float(lam))

    def h(self, x):
        """Strictly increasing minorant 1 - lam_eff/(1 + log(x - d + 1))."""
        x = np.asarray(x, dtype=float)
        return 1.0 - self.lam_eff / (1.0 + np.log(x - self.d + 1.0))

    def M(self, n):
        """h((2n+1) d), valid for arbitrarily large integer n."""
        n = int(n)
        if n.bit_length() > 40:
            # log(2 n d + 1) ~ log(2n) + log(d) to double accuracy
            lnval = _ln_big(2 * n) + math.log(self.d)
            return 1.0 - self.lam_eff / (1.0 + lnval)
        return 1.0 - self.lam_eff / (1.0 + math.log(2 * n * self.d + 1.0))


def _segment_coeffs(n, params, poly=None):
    """(a_n, b_n, u_n): the affine placement of the n-th polynomial."""
    u = monic_enum(n) if poly is None else poly
    if n == 1:
        return 0.5, params.M(1) / 2.0, u
    M = params.M(n)
    alpha = [float(c) for c in u.coeffs]
    B1 = (alpha[0] if alpha else 0.0) \
        + sum((a - abs(a)) / 2.0 for a in alpha[1:])
    B2 = (alpha[0] if alpha else 0.0) \
        + sum((a + abs(a)) / 2.0 for a in alpha[1:]) + 1.0
    a_n = ((1.0 + 2.0 * M) * B2 - (2.0 + M) * B1) / (3.0 * (B2 - B1))
    b_n = (1.0 - M) / (3.0 * (B2 - B1))
    return a_n, b_n, u


def sigma_segment(t, n, params, poly=None):
    """sigma on the n-th main segment, parametrized by t in [0, 1]:
    a_n + b_n u_n(t).  Works for arbitrarily large exact n."""
    a_n, b_n, u = _segment_coeffs(n, params, poly)
    return a_n + b_n * u(t)


def _beta_hat(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _beta(x, lo, hi):
    """Smooth transition: 1 for x <= lo, 0 for x >= hi."""
    up = _beta_hat(np.asarray(hi - x, dtype=float))
    down = _beta_hat(np.asarray(x - lo, dtype=float))
    return up / (up + down)


def sigma(x, params):
    """The activation at x (scalar or array)."""
    scalar = np.isscalar(x) or np.asarray(x).shape == ()
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = params.d
    out = np.empty_like(x)

    left = x < d
    if np.any(left):
        tail = (1.0 + params.M(1)) / 2.0
        out[left] = (1.0 - _beta_hat(d - x[left])) * tail

    rest = ~left
    if np.any(rest):
        xr = x[rest]
        n_seg = np.floor((xr / d + 1.0) / 2.0).astype(int)
        n_seg = np.maximum(n_seg, 1)
        vals = np.empty_like(xr)
        for n in np.unique(n_seg):
            mask = n_seg == n
            xs = xr[mask]
            a_n, b_n, u = _segment_coeffs(int(n), params)
            t = xs / d - 2 * n + 1
            main = xs <= 2 * n * d
            v = np.empty_like(xs)
            v[main] = a_n + b_n * u(t[main])
            trans = ~main
            if np.any(trans):
                xt = xs[trans]
                a_next, b_next, u_next = _segment_coeffs(int(n) + 1, params)
                K = 0.5 * ((a_n + b_n * u(1.0))
                           + (a_next + b_next * u_next(0.0)))
                eps = (1.0 - params.M(int(n))) / 6.0
                C = max(u.derivative_bound(1.5), 1e-300)
                delta = min(eps * d / (b_n * C), d / 2.0) if C > 0 \
                    else d / 2.0
                eps_next = (1.0 - params.M(int(n) + 1)) / 6.0
                C_next = max(u_next.derivative_bound(0.5), 1e-300)
                delta_next = min(eps_next * d / (b_next * C_next), d / 2.0)
                mid = (2 * n + 0.5) * d
                w = np.empty_like(xt)
                first = xt <= mid
                bl = _beta(xt[first], 2 * n * d, 2 * n * d + delta)
                w[first] = K - bl * (K - (a_n + b_n * u(xt[first] / d
                                                        - 2 * n + 1)))
                second = ~first
                br = 1.0 - _beta(xt[second], (2 * n + 1) * d - delta_next,
                                 (2 * n + 1) * d)
                w[second] = K - br * (K - (a_next + b_next
                                           * u_next(xt[second] / d
                                                    - 2 * n - 1)))
                v[trans] = w
            vals[mask] = v
        out[rest] = vals
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# two-neuron fitting

class NetworkParams:
    """c1 * sigma(x - t1) + c2 * sigma(x - t2) on [a, b].

    t1 = b - 2n(b-a) is kept exact (n may be astronomically large);
    t2 = 2a - b.
    """

    def __init__(self, c1, c2, n, a, b, params, poly):
        self.c1 = float(c1)
        self.c2 = float(c2)
        self.n = int(n)
        self.a = float(a)
        self.b = float(b)
        self.params = params
        self.poly = poly          # u_n, kept to avoid re-enumeration
        self.theta2 = 2 * self.a - self.b

    @property
    def theta1_exact(self):
        """b - 2n(b-a) as an exact Fraction."""
        return rational(self.b) - 2 * self.n * (rational(self.b)
                                                - rational(self.a))

    def theta1_log10(self):
        """log10 |theta1|, exact to ~1e-13 even for astronomical n."""
        t = self.theta1_exact
        if t == 0:
            return float("-inf")
        t = abs(t)
        return (_ln_big(t.numerator) - _ln_big(t.denominator)) / math.log(10)

    def theta1_decimal(self, digits=4):
        """Scientific-notation string of theta1 (huge values supported)."""
        t = self.theta1_exact
        if t == 0:
            return "0"
        sign = "-" if t < 0 else ""
        l10 = self.theta1_log10()
        e = math.floor(l10)
        mant = 10.0 ** (l10 - e)
        return f"{sign}{mant:.{digits}f}e{e:+d}"


def eval_network(net, x):
    """Network value; exploits x - t1 lying on main segment n and x - t2
    on the constant segment, so t1 is never formed in floating point."""
    x = np.asarray(x, dtype=float)
    if np.any(x < net.a - 1e-9) or np.any(x > net.b + 1e-9):
        raise ValueError("x outside [a, b]")
    d = net.b - net.a
    t = (x - net.a) / d
    seg = sigma_segment(t, net.n, net.params, poly=net.poly)
    const = (1.0 + net.params.M(1)) / 2.0
    return net.c1 * seg + net.c2 * const


def _simplest_within(value, tol):
    """Rational with smallest denominator within tol of value (via
    continued-fraction bisection), denominator capped at 1e9."""
    v = Fraction(value).limit_denominator(10**9)
    if tol <= 0:
        return v
    lo = Fraction(value - tol).limit_denominator(10**9)
    hi = Fraction(value + tol).limit_denominator(10**9)
    return _simplest_between(lo, hi)


def _simplest_between(lo, hi):
    """Simplest rational in [lo, hi] (continued-fraction descent)."""
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -_simplest_between(-hi, -lo)
    floor_lo = lo.numerator // lo.denominator
    if floor_lo == lo:
        return Fraction(floor_lo)
    if floor_lo + 1 <= hi:
        return Fraction(floor_lo + 1)
    return floor_lo + 1 / _simplest_between(1 / (hi - floor_lo),
                                            1 / (lo - floor_lo))


def _rationalize(coeffs, budget):
    """Per-coefficient simplest-rational rounding within the budget."""
    return [_simplest_within(float(c), budget) for c in coeffs]


def _cf_term_sum(q):
    """Sum of the canonical continued-fraction terms of |q| (0 for 0);
    equals the bit length of the Calkin-Wilf index of |q|."""
    q = abs(Fraction(q))
    return 0 if q == 0 else sum(_continued_fraction(q))


def _index_bits_estimate(monic_coeffs):
    """Rough bit length of the segment index the coefficients would yield.

    Each coefficient contributes a continued-fraction term of magnitude
    about 2^(its own CF-term sum); the index's bit length is the sum.
    """
    total = 0
    for c in monic_coeffs:
        s = _cf_term_sum(c)
        if s > 60:
            return float("inf")
        total += 1 << (s + 1)
    return total


def _poly_sup_dev(coeffs, g_vals, tgrid):
    vals = np.zeros_like(tgrid)
    for c in reversed(coeffs):
        vals = vals * tgrid + float(c)
    return float(np.max(np.abs(vals - g_vals)))


def fit_two_neuron(f, a, b, eps, max_degree=30, grid_n=1001):
    """Two-neuron approximation of f on [a, b] to accuracy eps.

    Rescale to g(t) = f(a + (b-a)t) on [0,1]; find a polynomial p with
    rational coefficients within eps/2 of g (exact coefficients when f is
    itself polynomial with rational coefficients, else Chebyshev
    interpolation + simplest-rational rounding); the monic normalization
    p/p0 picks the segment index n, and the weights place that segment's
    copy of p back through the activation.

    Returns (NetworkParams, achieved_error).
    """
    a, b = float(a), float(b)
    if not (a < b):
        raise ValueError("need a < b")
    d = b - a
    params = SigmoidParams(d, 0.25)
    tgrid = np.linspace(0.0, 1.0, grid_n)
    g_vals = np.asarray(f(a + d * tgrid), dtype=float)

    exact = _exact_poly_coeffs(f, a, b)
    if exact is not None:
        raw = _taylor_truncate(exact, eps, tgrid, g_vals)
        coeffs = _finalize_coeffs(raw, eps, tgrid, g_vals)
    else:
        coeffs = _chebyshev_rational(f, a, b, eps, tgrid, g_vals, max_degree)
    if coeffs is None:
        raise ArithmeticError(
            "polynomial budget exhausted before reaching eps/2")

    # strip trailing zeros
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()

    if all(c == 0 for c in coeffs):
        u = monic_enum(1)
        net = NetworkParams(0.0, 0.0, 1, a, b, params, u)
        ach = float(np.max(np.abs(g_vals)))
        return net, ach

    p0 = coeffs[-1]
    monic = MonicPoly([c / p0 for c in coeffs[:-1]])
    n = monic_index(monic)
    a_n, b_n, u = _segment_coeffs(n, params, poly=monic)
    c1 = float(p0) / b_n
    M1 = params.M(1)
    c2 = -2.0 * float(p0) * a_n / (b_n * (1.0 + M1))
    net = NetworkParams(c1, c2, n, a, b, params, monic)
    ach = float(np.max(np.abs(eval_network(net, a + d * tgrid) - g_vals)))
    return net, ach


def _exact_poly_coeffs(f, a, b):
    """Exact rational coefficients of g(t) = f(a + (b-a)t) when f carries a
    polynomial expression with rational coefficients; None otherwise."""
    ast = getattr(f, "ast", None)
    if ast is None:
        return None
    try:
        import sympy
        expr, syms = f.to_sympy()
        if len(syms) != 1:
            return None
        t = sympy.Symbol("t")
        g = sympy.expand(expr.subs(syms[0], rational(a) + (rational(b)
                                                           - rational(a)) * t))
        poly = sympy.Poly(g, t)
        if not all(c.is_Rational for c in poly.all_coeffs()):
            return None
        coeffs = [Fraction(int(c.p), int(c.q))
                  for c in reversed(poly.all_coeffs())]
        return coeffs
    except Exception:
        # non-polynomial expressions, symbolic failures: fall back
        return None


def _taylor_truncate(coeffs, eps, tgrid, g_vals):
    """Shortest midpoint-Taylor truncation of an exact polynomial that
    stays within eps/2 on the grid (exact rational arithmetic)."""
    half = Fraction(1, 2)
    deg = len(coeffs) - 1
    # expand in powers of (t - 1/2): d_j = sum_i coeffs_i * C(i,j) (1/2)^(i-j)
    shifted = []
    for j in range(deg + 1):
        s = Fraction(0)
        for i in range(j, deg + 1):
            s += coeffs[i] * math.comb(i, j) * half ** (i - j)
        shifted.append(s)
    for k in range(deg + 1):
        # back to powers of t, keeping only (t - 1/2)^j with j <= k
        trunc = [Fraction(0)] * (k + 1)
        for j in range(k + 1):
            for m in range(j + 1):
                trunc[m] += shifted[j] * math.comb(j, m) * (-half) ** (j - m)
        if _poly_sup_dev(trunc, g_vals, tgrid) <= 0.5 * eps:
            return trunc
    return list(coeffs)


def _finalize_coeffs(raw, eps, tgrid, g_vals, max_bits=200_000_000):
    """Rationalize a coefficient list, as coarsely as the error budget
    allows, while keeping the induced segment index constructible.

    Tries per-coefficient tolerances from the full remaining budget down;
    accepts the first set that stays within eps/2 on the grid and whose
    estimated index bit length is manageable.  Returns None on failure.
    """
    dev = _poly_sup_dev(raw, g_vals, tgrid)
    remaining = 0.5 * eps - dev
    if remaining < 0:
        return None
    m = len(raw)
    for scale in (1.0, 0.25, 0.0625, 0.0):
        budget = remaining / m * scale
        coeffs = _rationalize(raw, budget) if budget > 0 else \
            [c if isinstance(c, Fraction)
             else Fraction(float(c)).limit_denominator(10**9) for c in raw]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if _poly_sup_dev(coeffs, g_vals, tgrid) > 0.5 * eps:
            continue
        p0 = coeffs[-1]
        if p0 != 0:
            monic = [c / p0 for c in coeffs[:-1]]
            if _index_bits_estimate(monic) > max_bits:
                continue
        return coeffs
    return None


def _chebyshev_rational(f, a, b, eps, tgrid, g_vals, max_degree):
    """Chebyshev interpolant of adaptive degree, coefficients rationalized
    as simply as the budget allows; returns power-basis Fractions."""
    from numpy.polynomial import chebyshev as C
    from numpy.polynomial import polynomial as P
    for deg in range(1, max_degree + 1):
        k = np.arange(deg + 1)
        s_nodes = np.cos((2 * k + 1) * np.pi / (2 * (deg + 1)))  # in [-1,1]
        t_nodes = 0.5 + 0.5 * s_nodes
        vals = np.asarray(f(a + (b - a) * t_nodes), dtype=float)
        cheb = C.chebfit(s_nodes, vals, deg)
        poly_s = C.cheb2poly(cheb)          # powers of s = 2t - 1
        raw = [0.0]
        power = [1.0]
        for c in poly_s:                    # compose with s(t) = 2t - 1
            raw = P.polyadd(raw, c * np.asarray(power))
            power = P.polymul(power, [-1.0, 2.0])
        raw = list(np.atleast_1d(raw))
        coeffs = _finalize_coeffs(raw, eps, tgrid, g_vals)
        if coeffs is not None:
            return coeffs
    return None
