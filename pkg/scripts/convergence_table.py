"""Print the distance-vs-scale table of every degeneration limit.

    python3 scripts/convergence_table.py [--seed N] [--a-minus A] [--json PATH]

Stage 1 is measured against q_+, stages 2-4 against R. Each row shows the
distances, the fitted slope and, for stages 2-4, the ratio of consecutive
distances next to e^{-2 pi dR} and e^{-4 pi dR}.
"""
import argparse
import json
import math

import numpy as np

from rvdcascade.cascade import DegenParams, trig_modulus, verify_limit


def rand_c(rng, n):
    return rng.uniform(-0.3, 0.3, n) + 1j * rng.uniform(-0.1, 0.1, n)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--a-minus", type=float, default=0.4)
    ap.add_argument("--json", help="also write the reports to this file")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    mod = trig_modulus(args.a_minus)
    reports = []
    for N, mu in ((1, 0.21 + 0.03j), (2, 0.17 + 0.02j)):
        p1 = DegenParams(mod, rand_c(rng, 8), (), mu, N)
        p = DegenParams(mod, rand_c(rng, 4), rand_c(rng, 4), mu, N)
        for stage in (1, 2, 3, 4):
            rep = verify_limit(stage, p1 if stage == 1 else p, seed=args.seed)
            reports.append(rep.to_json())
            dist = "  ".join(f"{d:.3e}" for d in rep.distances)
            print(f"N={N} stage {stage}  {rep.scale_name}={rep.scales}  d=[{dist}]  slope={rep.exponent:.4f}")
            if stage > 1:
                dR = rep.scales[1] - rep.scales[0]
                ratios = [b / a for a, b in zip(rep.distances, rep.distances[1:])]
                print(f"    ratios {['%.3e' % r for r in ratios]}   e^(-2 pi dR)={math.exp(-2 * math.pi * dR):.3e}"
                      f"   e^(-4 pi dR)={math.exp(-4 * math.pi * dR):.3e}")
    print(f"reference slopes: -2 pi = {-2 * math.pi:.4f}, -4 pi = {-4 * math.pi:.4f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=2, sort_keys=True, default=str)


if __name__ == "__main__":
    main()
