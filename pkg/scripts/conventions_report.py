"""Report the conventions the cascade implementation settles on.

    python3 scripts/conventions_report.py

Checks, at a random parameter point, which z-form each x-form equals, the
prefactor used for each stage limit (and what the alternative would give),
and the sign of the U-term pieces, then prints a short summary.
"""
import math

import mpmath
import numpy as np

from rvdcascade.cascade import STAGE_SHIFTS, DegenParams, build_stage, trig_modulus, verify_limit
from rvdcascade.cascade.harness import _basis, _samples
from rvdcascade.shiftops import coefficient_difference, distance, shifted


def rand_c(rng, n):
    return rng.uniform(-0.3, 0.3, n) + 1j * rng.uniform(-0.1, 0.1, n)


def xform_partners(rng, am=0.37):
    print("x-form equals:")
    for stage in (1, 2, 3, 4):
        if stage == 1:
            p = DegenParams(trig_modulus(am), rand_c(rng, 8), ())
        else:
            p = DegenParams(trig_modulus(am), rand_c(rng, 4), rand_c(rng, 4))
        x = build_stage(stage, "x-form", p)
        diffs = {f: coefficient_difference(x, build_stage(stage, f, p)) for f in ("plain", "gauged")}
        best = min(diffs, key=diffs.get)
        print(f"  stage {stage}: {best} form (plain {diffs['plain']:.1e}, gauged {diffs['gauged']:.1e})")


def prefactors(rng, am=0.4):
    print("limit prefactor exp(r pi R):")
    p = DegenParams(trig_modulus(am), rand_c(rng, 4), rand_c(rng, 4))
    for stage in (2, 3, 4):
        sh = STAGE_SHIFTS[stage]
        with mpmath.workdps(40):
            pm = p.to_mp()
            lim = build_stage(stage, "plain", pm)
            samples = _samples(1, 6, 0)
            row = []
            for rate in sorted({sh.prefactor_rate, 0, -4}):
                prev = build_stage(stage - 1, "gauged", sh.shift_params(pm, 2.0))
                pre = shifted(prev, 2.0j * sh.dz, mpmath.exp(rate * mpmath.pi * 2.0))
                row.append(f"r={rate}: d(R=2)={float(distance(pre, lim, _basis(1), samples)):.2e}")
        print(f"  stage {stage}: used r={sh.prefactor_rate}; " + ", ".join(row))


def rates(rng, am=0.4):
    print("fitted slopes per unit R:")
    p = DegenParams(trig_modulus(am), rand_c(rng, 4), rand_c(rng, 4))
    for stage in (2, 3, 4):
        rep = verify_limit(stage, p)
        print(f"  stage {stage}: {rep.exponent:.4f}  (-4 pi = {-4 * math.pi:.4f})")


def main():
    rng = np.random.default_rng(0)
    xform_partners(rng)
    prefactors(rng)
    rates(rng)


if __name__ == "__main__":
    main()
