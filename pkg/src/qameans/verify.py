"""Randomized verification harness for the mean inequalities.

Every check draws its inputs from a seeded generator, evaluates both sides
of the claimed inequality, and reports the worst margin together with a
concrete counterexample when one is found.  Identical seeds give
byte-identical reports.  A sampled pass is evidence on the working
interval, not a proof; reports carry their trial counts and seeds so runs
can be reproduced exactly.

Checks: matrix interchange of two means (row-wise then column-wise),
the chained running-mean inequality, maximality of a computed envelope
against random concave competitor profiles, agreement of the direct and
reflected concave-envelope routes, and permutation symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .envelope import (
    EnvelopeResult,
    _monotone_chain,
    _reconstruct_from_values,
    qa_concave_envelope,
    qa_concave_envelope_via_reflection,
)
from .errors import CandidateRejected, UsageError
from .generators import Generator, TabulatedGenerator
from .means import MeanHandle, QuasiArithmeticMean

# Slack for sampled mean comparisons, relative to the interval span.
MEAN_CMP_TOL = 1e-9

# Agreement tolerance between the two concave-envelope routes.
DUALITY_TOL = 1e-6

# Permutation invariance tolerance (roundoff from summation order only).
SYMMETRY_TOL = 1e-12

# Slack for envelope-maximality comparisons; absorbs quadrature error of
# reconstructed candidate generators.
MAXIMALITY_TOL = 1e-6


@dataclass(frozen=True)
class TrialReport:
    """Outcome of one randomized check."""

    check: str
    trials: int
    failures: int
    worst_margin: float
    seed: int
    witness: dict | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.failures == 0) != (self.witness is None):
            raise UsageError("witness must be present exactly when failures > 0")

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "trials": self.trials,
            "failures": self.failures,
            "worst_margin": self.worst_margin,
            "seed": self.seed,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.extra:
            out["extra"] = self.extra
        return out


def _shrink(violation_fn, arr0: np.ndarray, v0: float, floor: float) -> tuple:
    """Pull a counterexample toward the all-equal point while it still violates.

    Coordinate-wise bisection toward the grand mean; a move is kept only if
    the violation stays at or above the floor, so the shrunk witness still
    re-verifies with a definite margin.
    """
    arr = arr0.astype(float).copy()
    target = float(arr.mean())
    for _ in range(40):
        moved = False
        for i in range(arr.size):
            trial = arr.copy()
            trial[i] = 0.5 * (trial[i] + target)
            if abs(trial[i] - arr[i]) <= 1e-15 * (1.0 + abs(arr[i])):
                continue
            if violation_fn(trial) >= floor:
                arr = trial
                moved = True
        if not moved:
            break
    return arr, float(violation_fn(arr))


def ingham_jessen_check(M: MeanHandle, N: MeanHandle, m: int, n: int,
                        trials: int, seed: int = 0) -> TrialReport:
    """Test N(row-wise M) <= M(column-wise N) on random n-by-m matrices.

    M consumes the m entries of each row, N the n row results; the right
    side applies N down each of the m columns and M across the results.
    """
    if M.domain != N.domain:
        raise UsageError("both means must share a working interval")
    if m < 1 or n < 1 or trials < 1:
        raise UsageError("need m, n, trials >= 1")
    interval = M.domain
    rng = np.random.default_rng(seed)
    X = rng.uniform(interval.lo, interval.hi, size=(trials, n, m))
    rows = M.batch(X.reshape(-1, m)).reshape(trials, n)
    lhs = N.batch(rows)
    cols = N.batch(np.swapaxes(X, 1, 2).reshape(-1, n)).reshape(trials, m)
    rhs = M.batch(cols)
    tol = MEAN_CMP_TOL * interval.span
    margin = rhs - lhs
    worst = float(np.min(margin))
    bad = np.nonzero(margin < -tol)[0]
    witness = None
    if len(bad) > 0:
        t = int(bad[0])

        def violation(flat):
            x = flat.reshape(n, m)
            l = N([M(row) for row in x])
            r = M([N(col) for col in x.T])
            return l - r

        v0 = float(lhs[t] - rhs[t])
        shrunk, v = _shrink(violation, X[t].ravel(), v0, max(2.0 * tol, 0.5 * v0))
        x = shrunk.reshape(n, m)
        witness = {
            "matrix": [[float(c) for c in row] for row in x],
            "lhs": float(N([M(row) for row in x])),
            "rhs": float(M([N(col) for col in x.T])),
            "violation": v,
            "trial": t,
        }
    return TrialReport("ingham_jessen", trials, int(len(bad)), worst, seed,
                       witness, extra={"m": m, "n": n, "tol": tol,
                                       "M": M.spec_string(), "N": N.spec_string()})


def kedlaya_check(M: MeanHandle, N: MeanHandle, n_max: int, trials: int,
                  seed: int = 0) -> TrialReport:
    """Test N of running M-prefix-means <= M of running N-prefix-means.

    For each random vector x of length 2..n_max the two sides chain the
    means over the prefixes (x_1), (x_1, x_2), ..., (x_1, ..., x_n).
    """
    if M.domain != N.domain:
        raise UsageError("both means must share a working interval")
    if n_max < 2 or trials < 1:
        raise UsageError("need n_max >= 2 and trials >= 1")
    interval = M.domain
    rng = np.random.default_rng(seed)
    tol = MEAN_CMP_TOL * interval.span
    sizes = rng.integers(2, n_max + 1, size=trials)
    worst = np.inf
    failures = 0
    witness = None
    witness_trial = None
    for n in range(2, n_max + 1):
        idx = np.nonzero(sizes == n)[0]
        if len(idx) == 0:
            continue
        X = rng.uniform(interval.lo, interval.hi, size=(len(idx), n))
        m_pref = np.column_stack([M.batch(X[:, :k]) for k in range(1, n + 1)])
        n_pref = np.column_stack([N.batch(X[:, :k]) for k in range(1, n + 1)])
        lhs = N.batch(m_pref)
        rhs = M.batch(n_pref)
        margin = rhs - lhs
        worst = min(worst, float(np.min(margin)))
        bad = np.nonzero(margin < -tol)[0]
        failures += int(len(bad))
        if len(bad) > 0:
            j = bad[np.argmin(idx[bad])]
            t = int(idx[j])
            if witness_trial is None or t < witness_trial:
                witness_trial = t

                def violation(vec):
                    l = N([M(vec[:k]) for k in range(1, len(vec) + 1)])
                    r = M([N(vec[:k]) for k in range(1, len(vec) + 1)])
                    return l - r

                v0 = float(lhs[j] - rhs[j])
                shrunk, v = _shrink(violation, X[j].copy(), v0,
                                    max(2.0 * tol, 0.5 * v0))
                witness = {
                    "values": [float(c) for c in shrunk],
                    "lhs": float(N([M(shrunk[:k]) for k in range(1, len(shrunk) + 1)])),
                    "rhs": float(M([N(shrunk[:k]) for k in range(1, len(shrunk) + 1)])),
                    "violation": v,
                    "trial": t,
                }
    return TrialReport("kedlaya", trials, failures, float(worst), seed, witness,
                       extra={"n_max": n_max, "tol": tol,
                              "M": M.spec_string(), "N": N.spec_string()})


def maximality_check(f: Generator, env: EnvelopeResult, candidates: int,
                     trials: int, seed: int = 0) -> TrialReport:
    """Pit the convex envelope against random convex QA minorants of QA_f.

    Every concave profile m' >= rho generates a convex QA mean below QA_f,
    so each candidate must come out <= the envelope mean on every sampled
    tuple.  Candidates are random piecewise-linear concave functions with
    2 to 6 vertices lifted above the rho graph; a candidate that fails to
    dominate rho after hulling is resampled and counted.
    """
    if env.status not in ("Envelope", "AlreadyExtremal"):
        raise UsageError(f"maximality needs an envelope, got status {env.status}")
    if env.direction != "convex":
        raise UsageError("maximality check applies to the convex envelope")
    interval = env.interval
    xs = interval.grid()
    rho_vals = env.rho.values
    # Candidates are grid-reconstructed, so the envelope side must go
    # through the same discretization: otherwise quadrature bias of order
    # step^2 shows up as spurious ordering failures against an exact mean.
    mvals = env.m(xs)
    env_mean = QuasiArithmeticMean(TabulatedGenerator(
        interval, env.g.values, env.g1.values, env.g1.values / mvals,
        source="envelope-grid"))
    rng = np.random.default_rng(seed)
    lift_scale = float(np.max(rho_vals) - np.min(rho_vals)) + 0.1 * max(
        1.0, float(np.max(np.abs(rho_vals))))
    rejected = 0
    worst = np.inf
    failures = 0
    witness = None
    total = 0
    for c in range(candidates):
        for _ in range(200):
            k = int(rng.integers(2, 7))
            inner = np.sort(rng.uniform(interval.lo, interval.hi, size=k - 2))
            vx = np.concatenate(([interval.lo], inner, [interval.hi]))
            if np.any(np.diff(vx) <= 0):
                rejected += 1
                continue
            vy = np.interp(vx, xs, rho_vals) + rng.uniform(0.01, 1.0, size=k) * lift_scale
            hull_pts = _monotone_chain(vx, vy, upper=True)
            hx = np.array([p[0] for p in hull_pts])
            hy = np.array([p[1] for p in hull_pts])
            mp = np.interp(xs, hx, hy)
            if np.all(mp >= rho_vals):
                break
            rejected += 1
        else:
            raise CandidateRejected(
                f"candidate {c}: no dominating concave profile in 200 attempts")
        h, h1 = _reconstruct_from_values(mp, interval)
        htab = TabulatedGenerator(interval, h.values, h1.values,
                                  h1.values / mp, source=f"candidate:{c}")
        cand_mean = QuasiArithmeticMean(htab)
        sizes = rng.integers(2, 7, size=trials)
        for n in range(2, 7):
            idx = np.nonzero(sizes == n)[0]
            if len(idx) == 0:
                continue
            X = rng.uniform(interval.lo, interval.hi, size=(len(idx), n))
            margin = env_mean.batch(X) - cand_mean.batch(X)
            total += len(idx)
            worst = min(worst, float(np.min(margin)))
            bad = np.nonzero(margin < -MAXIMALITY_TOL)[0]
            failures += int(len(bad))
            if len(bad) > 0 and witness is None:
                j = int(bad[0])
                witness = {
                    "candidate": c,
                    "values": [float(v) for v in X[j]],
                    "qa_candidate": float(cand_mean(X[j])),
                    "qa_envelope": float(env_mean(X[j])),
                    "margin": float(margin[j]),
                }
    return TrialReport("maximality", total, failures, float(worst), seed, witness,
                       extra={"candidates": candidates,
                              "rejected_candidates": rejected,
                              "tol": MAXIMALITY_TOL,
                              "generator": f.spec_string(),
                              "envelope_status": env.status})


def duality_check(f: Generator, trials: int, seed: int = 0) -> TrialReport:
    """Agreement of the two concave-envelope routes on random tuples.

    Route one takes the lower hull of rho directly; route two reflects the
    generator, computes the convex envelope on the mirror interval, and
    reflects back.  Both must produce the same status and means within
    1e-6 of each other.
    """
    env_a = qa_concave_envelope(f, seed=seed)
    env_b = qa_concave_envelope_via_reflection(f, seed=seed)
    if env_a.status != env_b.status:
        witness = {"status_direct": env_a.status, "status_reflected": env_b.status}
        return TrialReport("duality", trials, 1, 0.0, seed, witness,
                           extra={"generator": f.spec_string(), "tol": DUALITY_TOL})
    if env_a.status in ("NoneExists", "NonsmoothCase"):
        raise UsageError(
            f"duality check needs a concave envelope, got status {env_a.status}")
    mean_a = env_a.mean_handle()
    mean_b = env_b.mean_handle()
    interval = f.domain
    rng = np.random.default_rng(seed)
    sizes = rng.integers(2, 7, size=trials)
    worst = np.inf
    failures = 0
    witness = None
    for n in range(2, 7):
        idx = np.nonzero(sizes == n)[0]
        if len(idx) == 0:
            continue
        X = rng.uniform(interval.lo, interval.hi, size=(len(idx), n))
        diff = np.abs(mean_a.batch(X) - mean_b.batch(X))
        margin = DUALITY_TOL - diff
        worst = min(worst, float(np.min(margin)))
        bad = np.nonzero(margin < 0.0)[0]
        failures += int(len(bad))
        if len(bad) > 0 and witness is None:
            j = int(bad[0])
            witness = {
                "values": [float(v) for v in X[j]],
                "direct": float(mean_a(X[j])),
                "reflected": float(mean_b(X[j])),
                "difference": float(diff[j]),
            }
    return TrialReport("duality", trials, failures, float(worst), seed, witness,
                       extra={"generator": f.spec_string(), "tol": DUALITY_TOL,
                              "status": env_a.status})


def symmetry_check(mean: MeanHandle, trials: int, seed: int = 0) -> TrialReport:
    """Invariance of the mean under random permutations of its arguments."""
    interval = mean.domain
    rng = np.random.default_rng(seed)
    sizes = rng.integers(2, 7, size=trials)
    worst = np.inf
    failures = 0
    witness = None
    for n in range(2, 7):
        idx = np.nonzero(sizes == n)[0]
        if len(idx) == 0:
            continue
        X = rng.uniform(interval.lo, interval.hi, size=(len(idx), n))
        P = rng.permuted(X, axis=1)
        diff = np.abs(mean.batch(X) - mean.batch(P))
        margin = SYMMETRY_TOL - diff
        worst = min(worst, float(np.min(margin)))
        bad = np.nonzero(margin < 0.0)[0]
        failures += int(len(bad))
        if len(bad) > 0 and witness is None:
            j = int(bad[0])
            witness = {
                "values": [float(v) for v in X[j]],
                "permuted": [float(v) for v in P[j]],
                "value": float(mean(X[j])),
                "permuted_value": float(mean(P[j])),
                "difference": float(diff[j]),
            }
    return TrialReport("symmetry", trials, failures, float(worst), seed, witness,
                       extra={"mean": mean.spec_string(), "tol": SYMMETRY_TOL})


def ingham_jessen_sweep(M: MeanHandle, N: MeanHandle, trials: int,
                        seed: int = 0, max_dim: int = 5) -> TrialReport:
    """Run the matrix interchange check over all shapes 2..max_dim squared.

    Trials are split evenly across the (m, n) combinations; each runs on
    its own derived seed so the sweep stays reproducible as a whole.
    """
    combos = [(m, n) for m in range(2, max_dim + 1) for n in range(2, max_dim + 1)]
    per = max(1, trials // len(combos))
    failures = 0
    worst = np.inf
    witness = None
    total = 0
    for i, (m, n) in enumerate(combos):
        rep = ingham_jessen_check(M, N, m, n, per, seed + 7919 * i)
        total += rep.trials
        failures += rep.failures
        if rep.worst_margin < worst:
            worst = rep.worst_margin
        if witness is None and rep.witness is not None:
            witness = dict(rep.witness)
            witness["m"] = m
            witness["n"] = n
    return TrialReport("ingham_jessen_sweep", total, failures, float(worst),
                       seed, witness,
                       extra={"max_dim": max_dim, "trials_per_combo": per,
                              "M": M.spec_string(), "N": N.spec_string()})
