"""Tour of quasiarithmetic mean evaluation.

Walks the power family p in {-1, 0, 0.5, 1, 2, 3} over a few hand-picked
tuples, checks the textbook orderings on random data, and shows that the
dedicated power-mean evaluator and the generic generator path agree.

Run:  python3 demos/power_mean_tour.py [--trials N] [--seed S]
"""

import argparse

import numpy as np

from qameans.generators import parse_generator
from qameans.grids import WorkingInterval
from qameans.means import power_mean, qa_mean

SPECS = ["power:-1", "log", "power:0.5", "id", "power:2", "power:3"]
PS = [-1.0, 0.0, 0.5, 1.0, 2.0, 3.0]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--lo", type=float, default=0.1)
    ap.add_argument("--hi", type=float, default=10.0)
    args = ap.parse_args()

    interval = WorkingInterval(args.lo, args.hi)
    gens = [parse_generator(s, interval) for s in SPECS]

    print("values: (1, 4) and (1, 2, 8)")
    for spec, gen, p in zip(SPECS, gens, PS):
        a = qa_mean(gen, [1.0, 4.0])
        b = qa_mean(gen, [1.0, 2.0, 8.0])
        print(f"  p={p:>4}: {spec:<10} ({a:.6f}, {b:.6f})")

    # p = 0 is the geometric mean: (1*4)^(1/2) = 2, (1*2*8)^(1/3) ~ 2.52.
    assert abs(qa_mean(gens[1], [1.0, 4.0]) - 2.0) < 1e-12

    rng = np.random.default_rng(args.seed)
    worst_mono = np.inf
    worst_agree = 0.0
    for _ in range(args.trials):
        n = int(rng.integers(2, 7))
        v = rng.uniform(args.lo, args.hi, size=n)
        ms = [qa_mean(g, v) for g in gens]
        worst_mono = min(worst_mono, float(np.min(np.diff(ms))))
        for p, m in zip(PS, ms):
            worst_agree = max(worst_agree, abs(power_mean(p, v) - m))
        # Internality: every mean sits inside [min v, max v].
        assert v.min() - 1e-9 <= ms[0] and ms[-1] <= v.max() + 1e-9

    print(f"monotone in p on {args.trials} random tuples: "
          f"smallest step {worst_mono:.3e} (>= ~-1e-12 is a pass)")
    print(f"power_mean vs generator path: largest gap {worst_agree:.3e}")
    ok = worst_mono > -1e-9 and worst_agree < 1e-9
    print("tour:", "ok" if ok else "FAILED")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
