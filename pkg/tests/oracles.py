"""Independent reference computations used to freeze expected test values.

Everything in this module is deliberately redundant with the package under
test: brute-force enumeration, rational arithmetic, and closed-form calculus
worked out by hand. Tests compare package output against these oracles so
that a bug in the package cannot silently agree with itself.
"""

from fractions import Fraction
from itertools import combinations

import numpy as np


def frac_interp(vx, vy, x):
    """Evaluate the piecewise-linear function through (vx, vy) at x, exactly.

    vx must be strictly increasing and bracket x. All arithmetic is done in
    Fraction, so the result is the mathematical value with no rounding.
    """
    vx = [Fraction(v) for v in vx]
    vy = [Fraction(v) for v in vy]
    x = Fraction(x)
    if x <= vx[0]:
        return vy[0]
    if x >= vx[-1]:
        return vy[-1]
    for i in range(len(vx) - 1):
        if vx[i] <= x <= vx[i + 1]:
            t = (x - vx[i]) / (vx[i + 1] - vx[i])
            return vy[i] + t * (vy[i + 1] - vy[i])
    raise AssertionError("unreachable: x inside range but no bracket found")


def _slopes(vx, vy):
    return [
        (vy[i + 1] - vy[i]) / (vx[i + 1] - vx[i]) for i in range(len(vx) - 1)
    ]


def exhaustive_upper_hull(xs, ys):
    """Least concave majorant of the samples, by exhaustive subset search.

    Enumerates every subset of sample points that contains both endpoints,
    keeps the subsets whose polyline is concave (nonincreasing slopes) and
    dominates every sample, and returns the pointwise minimum over the kept
    polylines, evaluated at each xs, as a list of Fractions.

    Exponential in len(xs); intended for grids of at most ~12 points.
    """
    n = len(xs)
    fx = [Fraction(v) for v in xs]
    fy = [Fraction(v) for v in ys]
    interior = range(1, n - 1)
    best = [None] * n
    for k in range(0, n - 1):
        for chosen in combinations(interior, k):
            idx = (0,) + chosen + (n - 1,)
            vx = [fx[i] for i in idx]
            vy = [fy[i] for i in idx]
            sl = _slopes(vx, vy)
            if any(sl[i + 1] > sl[i] for i in range(len(sl) - 1)):
                continue
            vals = [frac_interp(vx, vy, fx[i]) for i in range(n)]
            if any(vals[i] < fy[i] for i in range(n)):
                continue
            if best[0] is None:
                best = vals
            else:
                best = [min(a, b) for a, b in zip(best, vals)]
    assert best[0] is not None, "the full sample set is always admissible"
    return best


def exhaustive_lower_hull(xs, ys):
    """Greatest convex minorant, via the upper hull of the negated samples."""
    neg = exhaustive_upper_hull(xs, [-Fraction(v) for v in ys])
    return [-v for v in neg]


def polyline_values_exact(vertices, xs):
    """Evaluate a hull's vertex list at the points xs, in exact arithmetic."""
    vx = [v[0] for v in vertices]
    vy = [v[1] for v in vertices]
    return [frac_interp(vx, vy, x) for x in xs]


def fd_first(values, step):
    """Central first difference, second-order one-sided at the ends."""
    v = np.asarray(values, dtype=float)
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2.0 * step)
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * step)
    out[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * step)
    return out


def fd_second(values, step):
    """Central second difference, copied inward at the ends."""
    v = np.asarray(values, dtype=float)
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (step * step)
    out[0] = out[1]
    out[-1] = out[-2]
    return out


def fd_curvature_ratio(g_values, step):
    """g'/g'' computed purely from tabulated g by finite differences.

    Independent of the package's stored derivative grids; used to check a
    reconstructed generator against the profile it was built from.
    """
    g1 = fd_first(g_values, step)
    g2 = fd_second(g_values, step)
    return g1 / g2


def chord_profile_generator(xs):
    """Closed form for the generator whose curvature ratio is 4x - 3 on [1,3].

    Solving g'/g'' = 4x - 3 with g(1) = 0, g'(1) = 1:
        g'(x) = (4x - 3)^(1/4)
        g(x)  = ((4x - 3)^(5/4) - 1) / 5
    """
    t = 4.0 * np.asarray(xs, dtype=float) - 3.0
    g1 = t**0.25
    g = (t**1.25 - 1.0) / 5.0
    return g, g1


def concave_chord_profile_generator(xs):
    """Closed form for the generator with curvature ratio 3 - 4x on [1, 3].

    Solving g'/g'' = 3 - 4x with g(1) = 0, g'(1) = 1:
        g'(x) = (4x - 3)^(-1/4)
        g(x)  = ((4x - 3)^(3/4) - 1) / 3
    """
    t = 4.0 * np.asarray(xs, dtype=float) - 3.0
    g1 = t**-0.25
    g = (t**0.75 - 1.0) / 3.0
    return g, g1


def constant_profile_generator(xs, lo, c):
    """Closed form for constant curvature ratio c: g(x) = c*(e^((x-lo)/c) - 1)."""
    x = np.asarray(xs, dtype=float)
    g1 = np.exp((x - lo) / c)
    g = c * (g1 - 1.0)
    return g, g1


def brute_qa_mean(fvals_fn, inv_fn, values):
    """Quasiarithmetic mean from user-supplied f and f^{-1} callables."""
    arr = np.asarray(values, dtype=float)
    return inv_fn(float(np.mean(fvals_fn(arr))))
