"""Convex and concave envelopes of quasiarithmetic means.

The construction runs entirely through the profile rho = f'/f'': the
convex QA envelope of QA_f is QA_g where g'/g'' is the least concave
majorant (upper hull) of rho, and the concave envelope dually uses the
greatest convex minorant (lower hull).  Hulls of the sampled profile are
computed by a monotone-chain scan; the generator g is recovered from its
profile m by two cumulative quadratures, since g'/g'' = m is equivalent
to (ln g')' = 1/m:

    g'(x) = exp( integral_lo^x dt / m(t) ),    g(x) = integral_lo^x g'(t) dt,

anchored at g(lo) = 0, g'(lo) = 1 (any anchor gives the same mean).

An envelope in a given direction exists at all only when the mean sits on
the right side of the arithmetic mean; that gate is decided by sampling
before anything else runs, and failures return the violating tuple.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .convexity import GateReport, _profile_pos_concave, dominates_arithmetic
from .errors import (
    DegenerateSecondDerivative,
    NonpositiveM,
    SignChange,
    UsageError,
)
from .generators import Generator, TabulatedGenerator, normalize, rho, tabulate
from .grids import ScalarGrid, WorkingInterval
from .means import ArithmeticMean, MeanHandle, QuasiArithmeticMean

DEFAULT_GATE_TRIALS = 10_000
DEFAULT_GATE_NMAX = 5


@dataclass(frozen=True)
class PiecewiseLinearHull:
    """Upper (concave) or lower (convex) hull of sampled points.

    Vertices are strictly increasing in x, span the whole interval, and
    interior collinear vertices are dropped, so the vertex list is the
    canonical minimal one.
    """

    vertices: tuple
    orientation: str  # "upper" or "lower"

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise UsageError("hull needs at least two vertices")
        vx = np.array([v[0] for v in self.vertices])
        if not np.all(np.diff(vx) > 0):
            raise UsageError("hull vertices must be strictly increasing in x")
        if self.orientation not in ("upper", "lower"):
            raise UsageError("orientation must be 'upper' or 'lower'")

    def __call__(self, x):
        vx = np.array([v[0] for v in self.vertices])
        vy = np.array([v[1] for v in self.vertices])
        return np.interp(x, vx, vy)

    def to_list(self) -> list:
        return [[float(x), float(y)] for x, y in self.vertices]


def _monotone_chain(xs: np.ndarray, ys: np.ndarray, upper: bool) -> tuple:
    """Hull of x-sorted points by a single stacked scan.

    The cross product of the last two stack points with the incoming point
    decides the turn; popping on >= 0 (upper) or <= 0 (lower) also removes
    collinear interior vertices.
    """
    stack: list = []
    for x, y in zip(xs, ys):
        while len(stack) >= 2:
            x0, y0 = stack[-2]
            x1, y1 = stack[-1]
            cross = (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0)
            if (cross >= 0.0) if upper else (cross <= 0.0):
                stack.pop()
            else:
                break
        stack.append((float(x), float(y)))
    return tuple(stack)


def concave_envelope_1d(samples: ScalarGrid) -> PiecewiseLinearHull:
    """Least concave piecewise-linear majorant of the samples (upper hull)."""
    xs = samples.interval.grid()
    return PiecewiseLinearHull(_monotone_chain(xs, samples.values, upper=True), "upper")


def convex_envelope_1d(samples: ScalarGrid) -> PiecewiseLinearHull:
    """Greatest convex piecewise-linear minorant of the samples (lower hull)."""
    xs = samples.interval.grid()
    return PiecewiseLinearHull(_monotone_chain(xs, samples.values, upper=False), "lower")


def _reconstruct_from_values(mvals: np.ndarray, interval: WorkingInterval):
    """Quadrature solve of g'/g'' = m for sign-constant m on the grid."""
    if np.any(mvals == 0.0) or (np.any(mvals > 0.0) and np.any(mvals < 0.0)):
        raise NonpositiveM("profile m must have one nonzero sign on the grid")
    xs = interval.grid()
    u = cumulative_trapezoid(1.0 / mvals, xs, initial=0.0)
    g1 = np.exp(u)
    g = cumulative_trapezoid(g1, xs, initial=0.0)
    return ScalarGrid(interval, g), ScalarGrid(interval, g1)


def reconstruct_generator(m: PiecewiseLinearHull, interval: WorkingInterval):
    """Solve g'/g'' = m by the integrating-factor quadratures.

    Requires m > 0 on the interval (the profile of an increasing convex
    generator); returns the grids (g, g1) anchored at g(lo) = 0,
    g'(lo) = 1.
    """
    mvals = np.asarray(m(interval.grid()), dtype=float)
    if np.any(mvals <= 0.0):
        k = int(np.argmin(mvals))
        raise NonpositiveM(
            f"m is not positive on the interval (m = {mvals[k]!r} "
            f"at x = {interval.grid()[k]!r})"
        )
    return _reconstruct_from_values(mvals, interval)


@dataclass
class EnvelopeResult:
    """Outcome of a QA envelope computation.

    status is one of Envelope, AlreadyExtremal, ArithmeticEnvelope,
    NoneExists, NonsmoothCase.  Grids are present for the first three;
    NoneExists carries the gate witness in diagnostics.
    """

    status: str
    direction: str  # "convex" or "concave"
    interval: WorkingInterval
    rho: ScalarGrid | None = None
    m: PiecewiseLinearHull | None = None
    g: ScalarGrid | None = None
    g1: ScalarGrid | None = None
    generator: Generator | None = None
    diagnostics: dict = field(default_factory=dict)

    def mean_handle(self) -> MeanHandle:
        """The envelope mean itself, as an evaluable handle."""
        if self.status == "ArithmeticEnvelope":
            return ArithmeticMean(self.interval)
        if self.status in ("Envelope", "AlreadyExtremal"):
            return QuasiArithmeticMean(self.generator)
        raise UsageError(f"no envelope mean for status {self.status}")

    def to_dict(self, include_grids: bool = True) -> dict:
        out = {
            "status": self.status,
            "direction": self.direction,
            "interval": {
                "lo": self.interval.lo,
                "hi": self.interval.hi,
                "grid_points": self.interval.grid_points,
            },
            "diagnostics": self.diagnostics,
        }
        if self.m is not None:
            out["hull_vertices"] = self.m.to_list()
        if include_grids and self.g is not None:
            out["grid"] = [float(v) for v in self.interval.grid()]
            out["g"] = [float(v) for v in self.g.values]
            out["g1"] = [float(v) for v in self.g1.values]
        return out


def _gate_summary(gate: GateReport) -> dict:
    out = {
        "holds": gate.holds,
        "direction": gate.direction,
        "trials": gate.trials,
        "n_max": gate.n_max,
        "seed": gate.seed,
        "tol": gate.tol,
        "worst_margin": gate.worst_margin,
    }
    return out


def _qa_envelope(gen: Generator, direction: str, gate_trials: int,
                 gate_n_max: int, seed: int) -> EnvelopeResult:
    ngen = normalize(gen)
    interval = ngen.domain
    xs = interval.grid()

    gate = dominates_arithmetic(
        ngen, gate_n_max, gate_trials,
        "ge" if direction == "convex" else "le", seed,
    )
    diag: dict = {"gate": _gate_summary(gate)}
    if not gate.holds:
        diag["witness"] = gate.witness
        return EnvelopeResult("NoneExists", direction, interval, diagnostics=diag)

    try:
        profile = rho(ngen)
    except DegenerateSecondDerivative as exc:
        diag["detail"] = str(exc)
        return EnvelopeResult(
            "ArithmeticEnvelope", direction, interval,
            g=ScalarGrid(interval, xs),
            g1=ScalarGrid(interval, np.ones_like(xs)),
            diagnostics=diag,
        )
    except SignChange as exc:
        diag["reason"] = "second derivative changes sign although the gate passed"
        diag["witness"] = exc.witness
        return EnvelopeResult("NonsmoothCase", direction, interval, diagnostics=diag)

    # The extremality test runs on rho for the convex direction and on
    # -rho for the concave one (rho negative and convex is the concave
    # counterpart of rho positive and concave).
    oriented = profile.values if direction == "convex" else -profile.values
    already = _profile_pos_concave(oriented, interval)
    diag["profile_test"] = {k: v for k, v in already.items() if k != "ok"}

    if already.get("reason") == "nonpositive-rho":
        # Wrong-signed profile past the gate: only reachable through
        # sampling slack; the construction's hypotheses do not hold.
        diag["reason"] = "profile has the wrong sign although the gate passed"
        return EnvelopeResult("NonsmoothCase", direction, interval,
                              rho=profile, diagnostics=diag)

    if already["ok"]:
        hull = (concave_envelope_1d(profile) if direction == "convex"
                else convex_envelope_1d(profile))
        gtab = tabulate(ngen)
        # The mean is its own envelope: keep the exact generator for the
        # mean handle and publish its sampled grids for serialization.
        return EnvelopeResult(
            "AlreadyExtremal", direction, interval,
            rho=profile, m=hull,
            g=ScalarGrid(interval, gtab.values),
            g1=ScalarGrid(interval, gtab.f1_values),
            generator=ngen, diagnostics=diag,
        )

    if direction == "convex":
        hull = concave_envelope_1d(profile)
        g, g1 = reconstruct_generator(hull, interval)
    else:
        hull = convex_envelope_1d(profile)
        g, g1 = _reconstruct_from_values(np.asarray(hull(xs), dtype=float), interval)

    mvals = np.asarray(hull(xs), dtype=float)
    # Store g'' = g'/m exactly so the result's own profile is m to the ulp.
    gen_out = TabulatedGenerator(
        interval, g.values, g1.values, g1.values / mvals,
        source=f"envelope({ngen.spec_string()})",
    )
    return EnvelopeResult(
        "Envelope", direction, interval,
        rho=profile, m=hull, g=g, g1=g1,
        generator=gen_out, diagnostics=diag,
    )


def qa_convex_envelope(gen: Generator, *, gate_trials: int = DEFAULT_GATE_TRIALS,
                       gate_n_max: int = DEFAULT_GATE_NMAX,
                       seed: int = 0) -> EnvelopeResult:
    """Largest convex QA mean below QA_f on the working interval.

    Pipeline: normalize; sampled existence gate QA_f >= A (failure means
    no convex QA minorant exists and returns the witness); degenerate f''
    gives the arithmetic mean; a positive concave profile means QA_f is
    its own envelope; otherwise the upper hull of the profile is taken and
    the envelope generator is reconstructed from it.
    """
    return _qa_envelope(gen, "convex", gate_trials, gate_n_max, seed)


def qa_concave_envelope(gen: Generator, *, gate_trials: int = DEFAULT_GATE_TRIALS,
                        gate_n_max: int = DEFAULT_GATE_NMAX,
                        seed: int = 0) -> EnvelopeResult:
    """Smallest concave QA mean above QA_f (direct route: lower hull of rho)."""
    return _qa_envelope(gen, "concave", gate_trials, gate_n_max, seed)


def qa_concave_envelope_via_reflection(gen: Generator, *,
                                       gate_trials: int = DEFAULT_GATE_TRIALS,
                                       gate_n_max: int = DEFAULT_GATE_NMAX,
                                       seed: int = 0) -> EnvelopeResult:
    """Concave envelope by the mirror route: reflect, convex-envelope, reflect.

    Cross-check for the direct route.  The returned result is expressed on
    the original interval: the hull transforms by (x, y) -> (-x, -y) and
    the envelope generator is the reflected mirror generator, so mean
    values are directly comparable with the direct route's.
    """
    from .generators import reflect_generator

    rgen = reflect_generator(gen)
    renv = _qa_envelope(rgen, "convex", gate_trials, gate_n_max, seed)
    interval = gen.domain
    xs = interval.grid()
    diag = dict(renv.diagnostics)
    diag["route"] = "reflected"

    if renv.status in ("NoneExists", "NonsmoothCase"):
        return EnvelopeResult(renv.status, "concave", interval, diagnostics=diag)
    if renv.status == "ArithmeticEnvelope":
        return EnvelopeResult(
            "ArithmeticEnvelope", "concave", interval,
            g=ScalarGrid(interval, xs),
            g1=ScalarGrid(interval, np.ones_like(xs)),
            diagnostics=diag,
        )

    # Mirror the hull: if m-hat is the profile envelope on -I, the original
    # envelope generator satisfies g'/g'' = -m-hat(-x).
    verts = tuple((-x, -y) for x, y in reversed(renv.m.vertices))
    hull = PiecewiseLinearHull(verts, "lower")
    gen_out = normalize(reflect_generator(renv.generator))
    gvals = np.asarray(gen_out.f(xs), dtype=float)
    g1vals = np.asarray(gen_out.f1(xs), dtype=float)
    rho_vals = None
    if renv.rho is not None:
        rho_vals = ScalarGrid(interval, -renv.rho.values[::-1])
    return EnvelopeResult(
        renv.status, "concave", interval,
        rho=rho_vals, m=hull,
        g=ScalarGrid(interval, gvals),
        g1=ScalarGrid(interval, g1vals),
        generator=gen_out, diagnostics=diag,
    )
