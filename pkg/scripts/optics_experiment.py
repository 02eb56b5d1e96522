#!/usr/bin/env python3
"""Cross-validate the circuit against the closed forms for one setting.

Optimizes the interferometer for the given overlap angle and priors,
prints the analytic detector distributions, then checks a seeded Monte
Carlo run against the Jaeger-Shimony optimum and the binomial error bar.

Usage: optics_experiment.py [alpha] [p1] [trials] [seed]
"""

import math
import sys

from uqsd import (
    PreparedState,
    detection_distribution,
    jaeger_shimony_ps,
    monte_carlo,
    optimal_config,
    ps_max,
)


def main(argv) -> int:
    alpha = float(argv[1]) if len(argv) > 1 else math.pi / 4
    p1 = float(argv[2]) if len(argv) > 2 else 0.6
    trials = int(argv[3]) if len(argv) > 3 else 10**6
    seed = int(argv[4]) if len(argv) > 4 else 20260810

    p2 = 1 - p1
    cfg = optimal_config(alpha, p1, p2)
    best = ps_max(alpha, p1, p2, math.pi / 2)
    js = jaeger_shimony_ps(p1, p2, math.cos(alpha))

    print(f"alpha = {alpha:.6f}  (input overlap cos(alpha) = {math.cos(alpha):.6f})")
    print(f"priors: p1 = {p1}, p2 = {p2}")
    print(f"circuit angles: x = {cfg.x:.6f}, phi = {cfg.phi:.6f}, xi = {cfg.xi:.6f}")
    print(f"ps_max = {best:.12f}   Jaeger-Shimony = {js:.12f}   diff = {abs(best - js):.2e}")

    for which in (PreparedState.STATE1, PreparedState.STATE2):
        d = detection_distribution(cfg, which)
        print(
            f"  {which.name}: PD1 = {d.p_pd1:.6f}  PD2 = {d.p_pd2:.6f}  "
            f"inconclusive = {d.p_inconclusive:.6f}  leak = {d.p_leak:.6f}"
        )

    rep = monte_carlo(cfg, p1, trials, seed)
    freq = rep.n_conclusive / trials
    sigma = math.sqrt(best * (1 - best) / trials)
    print(f"Monte Carlo: n = {trials}, seed = {seed}")
    print(f"  conclusive = {rep.n_conclusive} ({freq:.6f}), errors = {rep.n_errors}")
    print(f"  deviation from ps_max: {(freq - best) / sigma:+.2f} sigma")
    return 0 if rep.n_errors == 0 else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv))
