"""Convexity classification of quasiarithmetic means.

The decisive test: an increasing generator with nowhere-vanishing second
derivative yields a convex mean exactly when the profile rho = f'/f'' is
positive and concave on the interval.  Concavity of the mean is the dual
statement, decided by running the identical test on the reflected
generator; this makes the convex/concave verdicts coherent by construction
rather than by numerical luck.  Generators with f'' identically zero give
the arithmetic mean, the unique member that is both convex and concave.

Two sampled cross-checks accompany the classification: domination of the
arithmetic mean (the existence gate for convex envelopes) and a direct
midpoint Jensen test on random tuple pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSecondDerivative, SignChange
from .generators import Generator, normalize, reflect_generator, rho
from .grids import WorkingInterval
from .means import MeanHandle, _qa_mean_batch

# Positivity floor for rho, relative to the interval span.
POS_TAU = 1e-10

# Concavity slack for second differences of rho, relative to max |rho|.
CONC_TAU = 1e-8

# Slack for sampled mean comparisons, relative to the interval span.
GATE_TOL = 1e-9

# Absolute slack for the midpoint Jensen test.
JENSEN_TOL = 1e-9


@dataclass(frozen=True)
class ConvexityClass:
    """Classification verdict with the evidence that produced it.

    value is one of Convex, Concave, ArithmeticBoth, Neither.  The verdict
    is about the working interval only; behavior outside it is not probed.
    """

    value: str
    evidence: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"class": self.value, "evidence": self.evidence}


def _profile_pos_concave(values, interval: WorkingInterval) -> dict:
    """Decide positivity and concavity of a sampled profile.

    Returns a record with ok plus margins, or the failure reason and a
    concrete witness (nonpositive value, or a grid triple violating
    midpoint concavity).
    """
    xs = interval.grid()
    r = np.asarray(values, dtype=float)
    delta_pos = POS_TAU * interval.span
    pos_margin = float(np.min(r)) - delta_pos
    if pos_margin <= 0.0:
        k = int(np.argmin(r))
        return {
            "ok": False,
            "reason": "nonpositive-rho",
            "positivity_margin": pos_margin,
            "witness": {"x": float(xs[k]), "rho": float(r[k])},
        }

    d2 = r[:-2] - 2.0 * r[1:-1] + r[2:]
    delta_cc = CONC_TAU * float(np.max(np.abs(r)))
    conc_margin = delta_cc - float(np.max(d2))
    if conc_margin < 0.0:
        k = int(np.argmax(d2)) + 1
        return {
            "ok": False,
            "reason": "nonconcave-rho",
            "positivity_margin": pos_margin,
            "concavity_margin": conc_margin,
            "witness": {
                "triple_x": [float(xs[k - 1]), float(xs[k]), float(xs[k + 1])],
                "triple_rho": [float(r[k - 1]), float(r[k]), float(r[k + 1])],
                "second_difference": float(d2[k - 1]),
            },
        }
    return {
        "ok": True,
        "positivity_margin": pos_margin,
        "concavity_margin": conc_margin,
    }


def _positive_concave_test(gen: Generator) -> dict:
    """Run the positive-and-concave profile test on rho of a generator."""
    try:
        profile = rho(gen)
    except DegenerateSecondDerivative as exc:
        return {"ok": False, "reason": "degenerate", "detail": str(exc)}
    except SignChange as exc:
        return {"ok": False, "reason": "sign-change", "witness": exc.witness}
    return _profile_pos_concave(profile.values, gen.domain)


def classify(gen: Generator) -> ConvexityClass:
    """Classify the QA mean of gen as Convex, Concave, ArithmeticBoth, or Neither.

    Order of tests: degenerate f'' branch, then the positive-and-concave
    rho test on the normalized generator (Convex), then the same test on
    the reflected generator (Concave), else Neither with witnesses from
    both failed tests.
    """
    ngen = normalize(gen)
    primary = _positive_concave_test(ngen)
    if primary.get("reason") == "degenerate":
        return ConvexityClass(
            "ArithmeticBoth",
            {"branch": "f2-identically-zero", "detail": primary["detail"]},
        )
    if primary["ok"]:
        ev = {"branch": "rho-positive-concave"}
        ev.update({k: v for k, v in primary.items() if k != "ok"})
        return ConvexityClass("Convex", ev)

    dual = _positive_concave_test(normalize(reflect_generator(ngen)))
    if dual.get("ok"):
        ev = {"branch": "reflected-rho-positive-concave"}
        ev.update({k: v for k, v in dual.items() if k != "ok"})
        return ConvexityClass("Concave", ev)

    return ConvexityClass(
        "Neither",
        {
            "branch": "neither",
            "convex_test": {k: v for k, v in primary.items() if k != "ok"},
            "concave_test": {k: v for k, v in dual.items() if k != "ok"},
        },
    )


@dataclass(frozen=True)
class GateReport:
    """Sampled comparison of a QA mean against the arithmetic mean."""

    holds: bool
    direction: str  # "ge" or "le"
    trials: int
    n_max: int
    seed: int
    tol: float
    worst_margin: float
    witness: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "holds": self.holds,
            "direction": self.direction,
            "trials": self.trials,
            "n_max": self.n_max,
            "seed": self.seed,
            "tol": self.tol,
            "worst_margin": self.worst_margin,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _grouped_tuples(rng, trials: int, n_max: int, interval: WorkingInterval):
    """Random tuple sizes 2..n_max, yielded as (original indices, batch)."""
    sizes = rng.integers(2, n_max + 1, size=trials)
    for n in range(2, n_max + 1):
        idx = np.nonzero(sizes == n)[0]
        if len(idx) == 0:
            continue
        X = rng.uniform(interval.lo, interval.hi, size=(len(idx), n))
        yield idx, X


def dominates_arithmetic(gen: Generator, n_max: int, trials: int,
                         direction: str = "ge", seed: int = 0) -> GateReport:
    """Sampled test of QA_f >= A (direction "ge") or QA_f <= A ("le").

    Deterministic under the seed.  The worst margin is the minimum over
    trials of the claimed difference; a violation beyond the tolerance is
    returned as a witness tuple with both sides evaluated.
    """
    if direction not in ("ge", "le"):
        raise ValueError("direction must be 'ge' or 'le'")
    if trials < 1 or n_max < 2:
        raise ValueError("need trials >= 1 and n_max >= 2")
    rng = np.random.default_rng(seed)
    tol = GATE_TOL * gen.domain.span
    worst = np.inf
    witness = None
    witness_trial = None
    for idx, X in _grouped_tuples(rng, trials, n_max, gen.domain):
        qa = _qa_mean_batch(gen, X)
        am = X.mean(axis=1)
        margin = qa - am if direction == "ge" else am - qa
        k = int(np.argmin(margin))
        if margin[k] < worst:
            worst = float(margin[k])
        viol = np.nonzero(margin < -tol)[0]
        if len(viol) > 0:
            j = viol[np.argmin(idx[viol])]
            trial = int(idx[j])
            if witness_trial is None or trial < witness_trial:
                witness_trial = trial
                witness = {
                    "values": [float(v) for v in X[j]],
                    "qa_mean": float(qa[j]),
                    "arith_mean": float(am[j]),
                    "margin": float(margin[j]),
                    "trial": trial,
                }
    return GateReport(witness is None, direction, trials, n_max, seed,
                      tol, worst, witness)


@dataclass(frozen=True)
class JensenReport:
    """Sampled midpoint convexity/concavity test for a mean."""

    passed: bool
    sense: str  # "convex" or "concave"
    trials: int
    n_max: int
    seed: int
    tol: float
    worst_margin: float
    witness: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "passed": self.passed,
            "sense": self.sense,
            "trials": self.trials,
            "n_max": self.n_max,
            "seed": self.seed,
            "tol": self.tol,
            "worst_margin": self.worst_margin,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def jensen_midpoint_check(mean: MeanHandle, n_max: int, trials: int,
                          sense: str = "convex", seed: int = 0) -> JensenReport:
    """Test M((x+y)/2) <= (M(x)+M(y))/2 (or >= for sense "concave").

    Random tuple pairs of each length 2..n_max; the margin is the slack of
    the claimed inequality, so negative margin beyond tolerance is a
    counterexample and is reported with both sides.
    """
    if sense not in ("convex", "concave"):
        raise ValueError("sense must be 'convex' or 'concave'")
    if trials < 1 or n_max < 2:
        raise ValueError("need trials >= 1 and n_max >= 2")
    rng = np.random.default_rng(seed)
    worst = np.inf
    witness = None
    witness_trial = None
    interval = mean.domain
    sizes = rng.integers(2, n_max + 1, size=trials)
    for n in range(2, n_max + 1):
        idx = np.nonzero(sizes == n)[0]
        if len(idx) == 0:
            continue
        X = rng.uniform(interval.lo, interval.hi, size=(len(idx), n))
        Y = rng.uniform(interval.lo, interval.hi, size=(len(idx), n))
        lhs = mean.batch(0.5 * (X + Y))
        rhs = 0.5 * (mean.batch(X) + mean.batch(Y))
        margin = rhs - lhs if sense == "convex" else lhs - rhs
        k = int(np.argmin(margin))
        if margin[k] < worst:
            worst = float(margin[k])
        viol = np.nonzero(margin < -JENSEN_TOL)[0]
        if len(viol) > 0:
            j = viol[np.argmin(idx[viol])]
            trial = int(idx[j])
            if witness_trial is None or trial < witness_trial:
                witness_trial = trial
                witness = {
                    "x": [float(v) for v in X[j]],
                    "y": [float(v) for v in Y[j]],
                    "m_at_midpoint": float(lhs[j]),
                    "average_of_m": float(rhs[j]),
                    "margin": float(margin[j]),
                    "trial": trial,
                }
    return JensenReport(witness is None, sense, trials, n_max, seed,
                        JENSEN_TOL, worst, witness)
