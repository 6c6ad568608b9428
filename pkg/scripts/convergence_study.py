"""Convergence of multipartite reactivity estimates with sample count.

Prints, for each state, the estimate and half width at increasing sample
counts, plus the pinned regression values used by the test suite.

    python scripts/convergence_study.py [--states ghz:3 ghz:4 wstate:3]
"""

import argparse

from qreact.avg import AveragingMode, reactivity
from qreact.states import parse_state_spec


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--states", nargs="+", default=["ghz:3", "ghz:4", "wstate:3"])
    p.add_argument("--max-exp", type=int, default=17)
    args = p.parse_args()

    for spec in args.states:
        rho = parse_state_spec(spec)
        print(f"== {spec}")
        for sampler in ("fibonacci", "monte-carlo"):
            for k in range(12, args.max_exp + 1):
                mode = AveragingMode("sphere", sampler, 2**k, seed=7)
                r = reactivity(rho, mode)
                print(f"  {sampler:12s} N=2^{k:<3d} R={r.reactivity:.6f} +- {r.half_width:.2g}")
    pinned = [("ghz:3", AveragingMode.sphere(20000, seed=7)),
              ("ghz:4", AveragingMode.monte_carlo("sphere", 20000, seed=0))]
    print("== pinned")
    for spec, mode in pinned:
        r = reactivity(parse_state_spec(spec), mode)
        print(f"  {spec} {mode.describe()} N={mode.n} seed={mode.seed}: R={r.reactivity!r} +- {r.half_width:.2g}")


if __name__ == "__main__":
    main()
