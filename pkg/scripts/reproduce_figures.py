#!/usr/bin/env python3
"""Regenerate all figure datasets into results/ as CSV (+SVG previews).

Curves produced:
  fig_family_*.csv   p1 and |overlap| vs |gamma|^2 for lambda1 in {0.1, 0.3, 0.7, 0.9}
  fig_regions.csv    discrimination-regime map over the (|gamma|^2, lambda1) plane
  fig_merit_*.csv    p_s and p_e vs |gamma|^2 for lambda1 in {0.11, 0.22, 0.33}
  fig_psx_*.csv      circuit success probability vs asymmetry angle x
"""

import math
import sys
from pathlib import Path

from uqsd import cli

RESULTS = Path(__file__).resolve().parent.parent / "results"


def main() -> int:
    RESULTS.mkdir(exist_ok=True)
    rc = 0

    for lam in (0.1, 0.3, 0.7, 0.9):
        rc |= cli.main([
            "sweep-gamma", "--lambda1", str(lam), "--steps", "1001",
            "--out", str(RESULTS / f"fig_family_lambda{lam}.csv"), "--svg",
        ])

    rc |= cli.main(["region-map", "--resolution", "201", "--out", str(RESULTS / "fig_regions.csv")])

    for lam in (0.11, 0.22, 0.33):
        rc |= cli.main([
            "sweep-gamma", "--lambda1", str(lam), "--steps", "1001",
            "--out", str(RESULTS / f"fig_merit_lambda{lam}.csv"), "--svg",
        ])

    for alpha, p1, tag in (
        (math.pi / 3, 0.1, "a60_p01"),
        (math.pi / 3, 0.3, "a60_p03"),
        (math.pi / 4, 0.6, "a45_p06"),
        (math.pi / 4, 0.8, "a45_p08"),
    ):
        rc |= cli.main([
            "sweep-x", "--alpha", str(alpha), "--p1", str(p1), "--steps", "1001",
            "--out", str(RESULTS / f"fig_psx_{tag}.csv"), "--svg",
        ])

    print(f"figure data written under {RESULTS}")
    return rc


if __name__ == "__main__":
    sys.exit(main())
