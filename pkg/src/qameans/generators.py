"""Generator functions for quasiarithmetic means.

A generator is a continuous, strictly monotone function f on a working
interval, carried together with oracles for its first and second
derivatives.  Closed-form kinds (power:p, log, exp, id, affine:a:b) return
exact analytic values; tabulated kinds interpolate a sampled grid and
differentiate by central differences.

The central derived object is the slope/curvature profile f'/f'' computed
on the grid by :func:`rho`; its sign, positivity, and concavity drive the
classification and envelope machinery in the sibling modules.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from .errors import (
    DegenerateSecondDerivative,
    DomainError,
    NotMonotone,
    RangeError,
    SignChange,
    UsageError,
)
from .grids import ScalarGrid, WorkingInterval

# Relative floor deciding that f'' is identically zero on the grid, measured
# against max|f'| / (hi - lo) so the test is scale- and unit-consistent.
DEGENERATE_TAU = 1e-8

# Relative floor deciding that f'' is bounded away from zero: every grid value
# must exceed SIGN_TAU * max|f''| in magnitude, with a single sign throughout.
SIGN_TAU = 1e-8


class Generator:
    """Base class: strictly monotone f with derivative oracles on a domain."""

    domain: WorkingInterval

    def f(self, x):
        raise NotImplementedError

    def f1(self, x):
        raise NotImplementedError

    def f2(self, x):
        raise NotImplementedError

    def spec_string(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        d = self.domain
        return f"<{self.spec_string()} on [{d.lo}, {d.hi}] n={d.grid_points}>"

    def _validate_monotone(self):
        g1 = np.asarray(self.f1(self.domain.grid()), dtype=float)
        if not np.all(np.isfinite(g1)):
            raise NotMonotone(f"{self.spec_string()}: derivative not finite on grid")
        if not (np.all(g1 > 0.0) or np.all(g1 < 0.0)):
            raise NotMonotone(
                f"{self.spec_string()}: f' must be nonzero with one sign on the grid"
            )

    def is_increasing(self) -> bool:
        return float(self.f1(self.domain.lo)) > 0.0


class PowerGenerator(Generator):
    """f(x) = x**p on a positive interval, p != 0."""

    def __init__(self, p: float, domain: WorkingInterval):
        if p == 0:
            raise UsageError("power generator needs p != 0 (use the log kind for p = 0)")
        if domain.lo <= 0:
            raise UsageError("power generator needs lo > 0")
        self.p = float(p)
        self.domain = domain
        self._validate_monotone()

    def f(self, x):
        return np.asarray(x, dtype=float) ** self.p

    def f1(self, x):
        x = np.asarray(x, dtype=float)
        return self.p * x ** (self.p - 1.0)

    def f2(self, x):
        x = np.asarray(x, dtype=float)
        return self.p * (self.p - 1.0) * x ** (self.p - 2.0)

    def spec_string(self):
        return f"power:{self.p:g}"


class LogGenerator(Generator):
    """f(x) = ln x on a positive interval (the p = 0 member of the power family)."""

    def __init__(self, domain: WorkingInterval):
        if domain.lo <= 0:
            raise UsageError("log generator needs lo > 0")
        self.domain = domain

    def f(self, x):
        return np.log(np.asarray(x, dtype=float))

    def f1(self, x):
        return 1.0 / np.asarray(x, dtype=float)

    def f2(self, x):
        x = np.asarray(x, dtype=float)
        return -1.0 / (x * x)

    def spec_string(self):
        return "log"


class ExpGenerator(Generator):
    """f(x) = e**x."""

    def __init__(self, domain: WorkingInterval):
        self.domain = domain

    def f(self, x):
        return np.exp(np.asarray(x, dtype=float))

    def f1(self, x):
        return np.exp(np.asarray(x, dtype=float))

    def f2(self, x):
        return np.exp(np.asarray(x, dtype=float))

    def spec_string(self):
        return "exp"


class IdentityGenerator(Generator):
    """f(x) = x, the arithmetic-mean generator."""

    def __init__(self, domain: WorkingInterval):
        self.domain = domain

    def f(self, x):
        return np.asarray(x, dtype=float) + 0.0

    def f1(self, x):
        return np.ones_like(np.asarray(x, dtype=float))

    def f2(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def spec_string(self):
        return "id"


class AffineGenerator(Generator):
    """f(x) = a*x + b with a != 0; generates the arithmetic mean."""

    def __init__(self, a: float, b: float, domain: WorkingInterval):
        if a == 0:
            raise UsageError("affine generator needs a != 0")
        self.a = float(a)
        self.b = float(b)
        self.domain = domain

    def f(self, x):
        return self.a * np.asarray(x, dtype=float) + self.b

    def f1(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.a)

    def f2(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def spec_string(self):
        return f"affine:{self.a:g}:{self.b:g}"


class AffineOfGenerator(Generator):
    """Value-space affine transform a*f + b of another generator.

    Generates the same mean as the inner generator; a = -1, b = 0 is the
    negation used by :func:`normalize`.
    """

    def __init__(self, inner: Generator, a: float, b: float):
        if a == 0:
            raise UsageError("affine transform needs a != 0")
        self.inner = inner
        self.a = float(a)
        self.b = float(b)
        self.domain = inner.domain

    def f(self, x):
        return self.a * self.inner.f(x) + self.b

    def f1(self, x):
        return self.a * self.inner.f1(x)

    def f2(self, x):
        return self.a * self.inner.f2(x)

    def spec_string(self):
        return f"{self.a:g}*({self.inner.spec_string()})+{self.b:g}"


class ReflectedGenerator(Generator):
    """Argument-reflected generator x -> f(-x), living on the mirror interval."""

    def __init__(self, inner: Generator):
        self.inner = inner
        self.domain = inner.domain.reflected()

    def f(self, x):
        return self.inner.f(-np.asarray(x, dtype=float))

    def f1(self, x):
        return -self.inner.f1(-np.asarray(x, dtype=float))

    def f2(self, x):
        return self.inner.f2(-np.asarray(x, dtype=float))

    def spec_string(self):
        return f"reflected({self.inner.spec_string()})"


class TabulatedGenerator(Generator):
    """Generator given by sampled values on the grid, interpolated linearly.

    Derivative grids may be supplied (when built from an exact construction)
    or are otherwise filled in by central finite differences with the grid
    step, accurate to O(h^2) in the interior.
    """

    def __init__(self, domain: WorkingInterval, values, f1_values=None,
                 f2_values=None, source: str = "<grid>"):
        self.domain = domain
        vals = np.array(values, dtype=float)
        if vals.shape != (domain.grid_points,):
            raise UsageError("tabulated values must match the grid")
        d = np.diff(vals)
        if not (np.all(d > 0.0) or np.all(d < 0.0)):
            raise NotMonotone("tabulated values must be strictly monotone")
        self.values = vals
        h = domain.step
        self.f1_values = (np.array(f1_values, dtype=float) if f1_values is not None
                          else _central_diff(vals, h))
        self.f2_values = (np.array(f2_values, dtype=float) if f2_values is not None
                          else _central_diff2(vals, h))
        self.source = source
        self._validate_monotone()

    def f(self, x):
        return np.interp(x, self.domain.grid(), self.values)

    def f1(self, x):
        return np.interp(x, self.domain.grid(), self.f1_values)

    def f2(self, x):
        return np.interp(x, self.domain.grid(), self.f2_values)

    def spec_string(self):
        return f"table:{self.source}"


def _central_diff(values: np.ndarray, h: float) -> np.ndarray:
    """First derivative by central differences, one-sided at the ends."""
    n = len(values)
    out = np.empty(n)
    out[1:-1] = (values[2:] - values[:-2]) / (2.0 * h)
    if n >= 3:
        out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
        out[-1] = (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * h)
    return out


def _central_diff2(values: np.ndarray, h: float) -> np.ndarray:
    """Second derivative by central differences, one-sided at the ends."""
    n = len(values)
    out = np.empty(n)
    out[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / (h * h)
    if n >= 4:
        out[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / (h * h)
        out[-1] = (2.0 * values[-1] - 5.0 * values[-2] + 4.0 * values[-3] - values[-4]) / (h * h)
    else:
        out[0] = out[1]
        out[-1] = out[-2]
    return out


def _check_domain(gen: Generator, x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < gen.domain.lo) or np.any(arr > gen.domain.hi):
        bad = arr[(arr < gen.domain.lo) | (arr > gen.domain.hi)]
        raise DomainError(
            f"value {float(np.ravel(bad)[0])!r} outside working interval "
            f"[{gen.domain.lo}, {gen.domain.hi}]"
        )
    return arr


def _scalar_or_array(result, x):
    if np.isscalar(x) or (isinstance(x, np.ndarray) and x.ndim == 0):
        return float(result)
    return np.asarray(result, dtype=float)


def eval_f(gen: Generator, x):
    """Evaluate f at x (scalar or array); x must lie in the working interval."""
    arr = _check_domain(gen, x)
    return _scalar_or_array(gen.f(arr), x)


def eval_f1(gen: Generator, x):
    """Evaluate f' at x."""
    arr = _check_domain(gen, x)
    return _scalar_or_array(gen.f1(arr), x)


def eval_f2(gen: Generator, x):
    """Evaluate f'' at x.  Affine-like kinds return exactly 0."""
    arr = _check_domain(gen, x)
    return _scalar_or_array(gen.f2(arr), x)


def negate_generator(gen: Generator) -> Generator:
    """The generator -f, which produces the identical mean."""
    if isinstance(gen, AffineOfGenerator):
        return AffineOfGenerator(gen.inner, -gen.a, -gen.b)
    if isinstance(gen, AffineGenerator):
        return AffineGenerator(-gen.a, -gen.b, gen.domain)
    if isinstance(gen, TabulatedGenerator):
        return TabulatedGenerator(gen.domain, -gen.values, -gen.f1_values,
                                  -gen.f2_values, source=gen.source)
    return AffineOfGenerator(gen, -1.0, 0.0)


def reflect_generator(gen: Generator) -> Generator:
    """The generator x -> f(-x) on the mirror interval.

    Double reflection unwraps structurally, so reflecting twice gives back
    the original object and downstream tests evaluate bit-identically.
    """
    if isinstance(gen, ReflectedGenerator):
        return gen.inner
    if isinstance(gen, AffineOfGenerator):
        return AffineOfGenerator(reflect_generator(gen.inner), gen.a, gen.b)
    return ReflectedGenerator(gen)


def normalize(gen: Generator) -> Generator:
    """Return gen unchanged if increasing, else its negation.

    The returned generator is increasing and produces the identical mean.
    Idempotent: normalizing twice gives the same object.
    """
    g1 = np.asarray(gen.f1(gen.domain.grid()), dtype=float)
    if np.all(g1 > 0.0):
        return gen
    if np.all(g1 < 0.0):
        return negate_generator(gen)
    raise NotMonotone(f"{gen.spec_string()}: f' changes sign on the grid")


def rho(gen: Generator) -> ScalarGrid:
    """The slope/curvature profile f'/f'' sampled on the grid.

    Requires an increasing generator whose second derivative has a single
    sign and is bounded away from zero on the grid.  Raises
    DegenerateSecondDerivative when f'' is numerically zero everywhere
    (affine-equivalent generator, arithmetic mean) and SignChange when f''
    flips sign or dips below the nonvanishing floor at some grid point.
    """
    xs = gen.domain.grid()
    g1 = np.asarray(gen.f1(xs), dtype=float)
    if not np.all(g1 > 0.0):
        raise UsageError("rho requires a normalized (increasing) generator")
    g2 = np.asarray(gen.f2(xs), dtype=float)
    scale2 = float(np.max(np.abs(g2)))
    degenerate_floor = DEGENERATE_TAU * float(np.max(np.abs(g1))) / gen.domain.span
    if scale2 <= degenerate_floor:
        raise DegenerateSecondDerivative(
            f"{gen.spec_string()}: f'' vanishes on the whole grid "
            f"(max |f''| = {scale2:.3e} <= {degenerate_floor:.3e})"
        )
    floor = SIGN_TAU * scale2
    small = np.abs(g2) <= floor
    if np.any(small):
        k = int(np.argmax(small))
        raise SignChange(
            f"{gen.spec_string()}: |f''| dips to {abs(g2[k]):.3e} at x = {xs[k]!r}",
            witness={"x": float(xs[k]), "f2": float(g2[k])},
        )
    if np.any(g2 > 0.0) and np.any(g2 < 0.0):
        k = int(np.argmax(np.sign(g2) != np.sign(g2[0])))
        raise SignChange(
            f"{gen.spec_string()}: f'' changes sign between x = {xs[k - 1]!r} "
            f"and x = {xs[k]!r}",
            witness={"x": float(xs[k]), "f2": float(g2[k]),
                     "x_prev": float(xs[k - 1]), "f2_prev": float(g2[k - 1])},
        )
    return ScalarGrid(gen.domain, g1 / g2)


def invert_f(gen: Generator, y: float) -> float:
    """Solve f(x) = y on the working interval.

    Closed-form kinds are inverted by bisection on the monotone f; tabulated
    kinds by binary search on the value grid followed by linear
    interpolation.  The target must lie between f(lo) and f(hi).
    """
    lo, hi = gen.domain.lo, gen.domain.hi
    flo, fhi = float(gen.f(lo)), float(gen.f(hi))
    y = float(y)
    ylo, yhi = min(flo, fhi), max(flo, fhi)
    if y < ylo or y > yhi:
        raise RangeError(f"target {y!r} outside generator range [{ylo!r}, {yhi!r}]")
    if isinstance(gen, TabulatedGenerator):
        vals = gen.values
        xs = gen.domain.grid()
        if vals[0] > vals[-1]:
            # np.interp needs an increasing abscissa
            vals = -vals
            y = -y
        return float(np.interp(y, vals, xs))
    increasing = fhi > flo
    a, b = lo, hi
    for _ in range(120):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fm = float(gen.f(mid))
        if (fm < y) == increasing:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def tabulate(gen: Generator) -> TabulatedGenerator:
    """Sample a generator (and its derivatives) into a tabulated one."""
    xs = gen.domain.grid()
    return TabulatedGenerator(
        gen.domain,
        np.asarray(gen.f(xs), dtype=float),
        np.asarray(gen.f1(xs), dtype=float),
        np.asarray(gen.f2(xs), dtype=float),
        source=f"tabulated({gen.spec_string()})",
    )


def parse_generator(spec: str, interval: WorkingInterval | None = None) -> Generator:
    """Build a generator from its spec string.

    Grammar: ``power:<p>``, ``log``, ``exp``, ``id``, ``affine:<a>:<b>``,
    ``table:<path>``.  Table specs carry their own grid; the other kinds
    need an explicit working interval.
    """
    spec = spec.strip()
    if spec.startswith("table:"):
        return load_table(spec[len("table:"):])
    if interval is None:
        raise UsageError(f"generator spec {spec!r} needs a working interval")
    if spec == "log":
        return LogGenerator(interval)
    if spec == "exp":
        return ExpGenerator(interval)
    if spec == "id":
        return IdentityGenerator(interval)
    if spec.startswith("power:"):
        try:
            p = float(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad power spec {spec!r}") from None
        return PowerGenerator(p, interval)
    if spec.startswith("affine:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad affine spec {spec!r}, expected affine:<a>:<b>")
        try:
            a, b = float(parts[1]), float(parts[2])
        except ValueError:
            raise UsageError(f"bad affine spec {spec!r}") from None
        return AffineGenerator(a, b, interval)
    raise UsageError(f"unknown generator spec {spec!r}")


def load_table(path: str) -> TabulatedGenerator:
    """Load a tabulated generator from a CSV file.

    The file must carry a uniformly spaced, strictly increasing ``x`` column
    and a strictly monotone value column.  With a header row, the value
    column is the one named ``f`` (falling back to ``g``, so envelope CSV
    output reloads directly); a ``g1``/``f1`` column, when present, is used
    as the first-derivative grid.  Without a header the first two columns
    are taken as x and f.  Rows starting with '#' are skipped.
    """
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh)
                if row and any(c.strip() for c in row)
                and not row[0].lstrip().startswith("#")]
    if not rows:
        raise UsageError(f"{path}: empty table")

    header = None
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
    if len(rows) < 3:
        raise UsageError(f"{path}: need at least 3 rows")

    data = np.array([[float(c) for c in row] for row in rows], dtype=float)

    def col(*names, default=None):
        if header is not None:
            for name in names:
                if name in header:
                    return data[:, header.index(name)]
        return data[:, default] if default is not None else None

    xs = col("x", default=0)
    fs = col("f", "g", default=1)
    f1s = col("f1", "g1")

    steps = np.diff(xs)
    if np.any(steps <= 0):
        raise UsageError(f"{path}: x column must be strictly increasing")
    h = (xs[-1] - xs[0]) / (len(xs) - 1)
    if np.max(np.abs(steps - h)) > 1e-9 * max(abs(h), 1.0):
        raise UsageError(f"{path}: x column must be uniformly spaced")

    interval = WorkingInterval(float(xs[0]), float(xs[-1]), len(xs))
    return TabulatedGenerator(interval, fs, f1_values=f1s, source=path)


def generator_kinds() -> list[str]:
    """Spec strings understood by :func:`parse_generator`."""
    return ["power:<p>", "log", "exp", "id", "affine:<a>:<b>", "table:<path>"]
