"""Command-line driver: decompositions, discrimination sweeps, circuit runs.

Subcommands
    decompose    -- one gamma-decomposition with its discrimination metrics
    sweep-gamma  -- CSV of p1, |beta|, p_s, p_e over a |gamma|^2 grid
    region-map   -- CSV grid of discrimination regimes over (|gamma|^2, lambda1)
    optics       -- optimize the circuit, print detector statistics, run Monte Carlo
    sweep-x      -- CSV of the circuit success probability over the asymmetry angle
    spdc-prepare -- heralded two-photon preparation of the mixed state

All angles are radians unless --degrees is given.  CSV floats carry 12
significant digits so reruns are byte identical; every invocation appends
a JSON-lines run record next to its output (or in the working directory).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import decomposition as dec
from . import discrimination as disc
from . import optics
from . import qcore

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


class _ValidationFailure(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional parameter sweep over gamma_sq or the circuit angle x."""

    variable: str
    start: float
    stop: float
    steps: int
    fixed_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variable not in ("gamma_sq", "x"):
            raise ValueError(f"unknown sweep variable {self.variable!r}")
        if self.steps < 2:
            raise ValueError("a sweep needs at least 2 steps")
        if not self.start < self.stop:
            raise ValueError("sweep start must be below stop")
        if self.variable == "gamma_sq" and not (0.0 <= self.start and self.stop <= 1.0):
            raise ValueError("gamma_sq sweeps live in [0, 1]")
        if self.variable == "x":
            alpha = self.fixed_params.get("alpha", math.pi / 2)
            if not (0.0 <= self.start and self.stop <= alpha + 1e-12):
                raise ValueError("x sweeps live in [0, alpha]")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class RunRecord:
    """Provenance line for one invocation; replay of a seeded command
    reproduces the recorded outputs bit for bit."""

    command: str
    params: dict
    outputs: dict
    seed: int | None
    timestamp: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "params": self.params,
                "outputs": self.outputs,
                "seed": self.seed,
                "timestamp": self.timestamp,
            },
            sort_keys=True,
        )


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def _fmt_complex(z: complex) -> str:
    return f"{_fmt(z.real)}{'+' if z.imag >= 0 else '-'}{_fmt(abs(z.imag))}j"


def _record_run(command: str, params: dict, outputs: dict, seed: int | None, out: Path | None) -> None:
    directory = out.parent if out is not None else Path.cwd()
    record = RunRecord(
        command=command,
        params=params,
        outputs=outputs,
        seed=seed,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    with open(directory / "runs.jsonl", "a", encoding="utf-8") as fh:
        fh.write(record.to_json() + "\n")


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> str:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return hashlib.sha256(path.read_bytes()).hexdigest()


_SVG_COLORS = ("#1f6fb2", "#c23b22", "#3a8f3a", "#8a5fb0")


def _write_svg(path: Path, title: str, x_label: str, xs, series) -> None:
    """Bare polyline plot, one line per (label, values) pair."""
    width, height, pad = 640, 420, 56
    xs = [float(v) for v in xs]
    all_y = [float(v) for _, ys in series for v in ys if v == v]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(all_y + [0.0]), max(all_y + [1.0])
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def sx(v):
        return pad + (v - x_lo) / x_span * (width - 2 * pad)

    def sy(v):
        return height - pad - (v - y_lo) / y_span * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="15">{title}</text>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 16}" text-anchor="middle" font-size="12">{x_label}</text>',
        f'<text x="{pad}" y="{height - pad + 16}" font-size="11">{_fmt(x_lo)}</text>',
        f'<text x="{width - pad}" y="{height - pad + 16}" text-anchor="end" font-size="11">{_fmt(x_hi)}</text>',
        f'<text x="{pad - 6}" y="{height - pad}" text-anchor="end" font-size="11">{_fmt(y_lo)}</text>',
        f'<text x="{pad - 6}" y="{pad + 4}" text-anchor="end" font-size="11">{_fmt(y_hi)}</text>',
    ]
    for k, (label, ys) in enumerate(series):
        color = _SVG_COLORS[k % len(_SVG_COLORS)]
        points = " ".join(
            f"{sx(x):.2f},{sy(float(y)):.2f}" for x, y in zip(xs, ys) if float(y) == float(y)
        )
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')
        parts.append(
            f'<text x="{width - pad + 4}" y="{pad + 16 * k + 12}" font-size="11" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise _ValidationFailure(message)


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def _canonical_state(lambda1: float) -> qcore.RankTwoMixedState:
    return qcore.RankTwoMixedState(
        lambda1, 1.0 - lambda1, qcore.PureState(1, 0), qcore.PureState(0, 1)
    )


# ---------------------------------------------------------------- decompose


def cmd_decompose(args) -> int:
    lam = args.lambda1
    g_sq = args.gamma_sq
    theta = _angle(args.theta, args.degrees)
    _require(0.0 <= lam <= 1.0, "--lambda1 must lie in [0, 1]")
    _require(0.0 <= g_sq <= 1.0, "--gamma-sq must lie in [0, 1]")
    gamma = dec.DecompositionParameter(math.sqrt(g_sq), theta)

    degenerate = abs(lam - (1.0 - lam)) <= qcore.ATOL
    if degenerate:
        d = dec.degenerate_decomposition(gamma)
        print("degenerate spectrum (lambda1 = lambda2 = 1/2): every decomposition")
        print("mixes to I/2; returning the orthogonal pair for this gamma.")
    else:
        d = dec.decomposition_states(_canonical_state(lam), gamma)

    print(f"lambda1 = {_fmt(lam)}   lambda2 = {_fmt(1.0 - lam)}")
    print(f"gamma   : modulus = {_fmt(gamma.modulus)}   theta = {_fmt(gamma.phase)}   |gamma|^2 = {_fmt(g_sq)}")
    print(f"priors  : p1 = {_fmt(d.p1)}   p2 = {_fmt(d.p2)}")
    print(f"beta1   = ({_fmt_complex(complex(d.beta1.amp0))})|l1> + ({_fmt_complex(complex(d.beta1.amp1))})|l2>")
    print(f"beta2   = ({_fmt_complex(complex(d.beta2.amp0))})|l1> + ({_fmt_complex(complex(d.beta2.amp1))})|l2>")
    print(f"overlap = {_fmt_complex(d.overlap)}   modulus = {_fmt(abs(d.overlap))}")
    m = disc.metrics(d.p1, d.p2, abs(d.overlap))
    print(f"discrimination: regime = {m.regime.value}   p_s = {_fmt(m.p_success)}   p_e = {_fmt(m.p_error_min)}")
    _record_run(
        "decompose",
        {"lambda1": lam, "gamma_sq": g_sq, "theta": theta},
        {"p1": d.p1, "p2": d.p2, "overlap_mod": abs(d.overlap), "p_s": m.p_success, "p_e": m.p_error_min},
        None,
        None,
    )
    return EXIT_OK


# --------------------------------------------------------------- sweep-gamma


def cmd_sweep_gamma(args) -> int:
    lam = args.lambda1
    _require(0.0 < lam < 1.0, "--lambda1 must lie strictly inside (0, 1) for a full sweep")
    _require(args.steps >= 2, "--steps must be at least 2")
    out = Path(args.out)
    spec = SweepSpec("gamma_sq", 0.0, 1.0, args.steps, {"lambda1": lam})

    rows = []
    for g_sq in spec.grid():
        g = math.sqrt(g_sq)
        p1, _ = dec.decomposition_probabilities(lam, g)
        beta_mod = abs(dec.decomposition_overlap(lam, dec.DecompositionParameter(g)))
        rows.append(
            [_fmt(g_sq), _fmt(p1), _fmt(beta_mod), _fmt(disc.ps_of_gamma(lam, g)), _fmt(disc.pe_of_gamma(lam, g))]
        )
    digest = _write_csv(out, ["gamma_sq", "p1", "beta_mod", "p_s", "p_e"], rows)
    if args.svg:
        svg = out.with_suffix(".svg")
        xs = [r[0] for r in rows]
        _write_svg(
            svg,
            f"lambda1 = {_fmt(lam)}",
            "gamma_sq",
            xs,
            [("p1", [r[1] for r in rows]), ("beta_mod", [r[2] for r in rows]),
             ("p_s", [r[3] for r in rows]), ("p_e", [r[4] for r in rows])],
        )
    print(f"wrote {len(rows)} rows to {out}")
    _record_run(
        "sweep-gamma",
        {"lambda1": lam, "steps": args.steps, "out": str(out)},
        {"rows": len(rows), "csv_sha256": digest},
        None,
        out,
    )
    return EXIT_OK


# ---------------------------------------------------------------- region-map


def cmd_region_map(args) -> int:
    _require(args.resolution >= 10, "--resolution must be at least 10")
    out = Path(args.out)
    grid = np.linspace(0.0, 1.0, args.resolution)

    rows = []
    for lam in grid:
        for g_sq in grid:
            corner = (lam == 0.0 and g_sq == 0.0) or (lam == 1.0 and g_sq == 1.0)
            if corner:
                # The decomposition denominator vanishes here; along both
                # adjoining edges p_s is identically 1, so the map is
                # continued by that value.
                regime, ps = disc.DiscriminationRegime.BOTH_CONCLUSIVE, 1.0
            else:
                g = math.sqrt(g_sq)
                p1, p2 = dec.decomposition_probabilities(lam, g)
                beta_mod = min(abs(dec.decomposition_overlap(lam, dec.DecompositionParameter(g))), 1.0)
                regime = disc.classify_regime(p1, p2, beta_mod)
                ps = disc.ps_of_gamma(lam, g)
            rows.append([_fmt(g_sq), _fmt(lam), regime.value, _fmt(ps)])
    digest = _write_csv(out, ["gamma_sq", "lambda1", "regime", "p_s"], rows)
    print(f"wrote {len(rows)} cells to {out}")
    _record_run(
        "region-map",
        {"resolution": args.resolution, "out": str(out)},
        {"rows": len(rows), "csv_sha256": digest},
        None,
        out,
    )
    return EXIT_OK


# -------------------------------------------------------------------- optics


def cmd_optics(args) -> int:
    alpha = _angle(args.alpha, args.degrees)
    varphi = _angle(args.varphi, args.degrees)
    p1 = args.p1
    _require(0.0 < alpha <= math.pi / 2 + 1e-12, "--alpha must lie in (0, pi/2]")
    _require(0.0 <= p1 <= 1.0, "--p1 must lie in [0, 1]")
    _require(args.trials >= 0, "--trials must be nonnegative")
    _require(args.seed >= 0, "--seed must be nonnegative")
    p2 = 1.0 - p1
    out = Path(args.out) if args.out else None

    if args.x is not None:
        x = _angle(args.x, args.degrees)
        _require(0.0 <= x <= alpha, "--x must lie in [0, alpha]")
        phi = optics.orthogonality_phi(alpha, x, varphi)
        cfg = optics.SetupConfig(alpha, x, phi, varphi, optics.detection_plate_angle(alpha, x))
    else:
        cfg = optics.optimal_config(alpha, p1, p2, varphi)

    p_best = optics.ps_max(alpha, p1, p2, varphi)
    regime = disc.classify_regime(p1, p2, math.cos(alpha))
    dist1 = optics.detection_distribution(cfg, optics.PreparedState.STATE1)
    dist2 = optics.detection_distribution(cfg, optics.PreparedState.STATE2)
    p_conclusive = p1 * (dist1.p_pd1 + dist1.p_pd2) + p2 * (dist2.p_pd1 + dist2.p_pd2)

    print(f"alpha = {_fmt(alpha)}   p1 = {_fmt(p1)}   p2 = {_fmt(p2)}   varphi = {_fmt(varphi)}")
    print(f"regime   : {regime.value}")
    print(f"x        = {_fmt(cfg.x)}" + ("   (override)" if args.x is not None else "   (optimal)"))
    print(f"phi (WP1)= {_fmt(cfg.phi)}")
    print(f"xi  (WP3)= {_fmt(cfg.xi)}")
    print(f"ps_max   = {_fmt(p_best)}   circuit conclusive probability = {_fmt(p_conclusive)}")
    for label, dist in (("state 1", dist1), ("state 2", dist2)):
        print(
            f"prepared {label}: PD1 = {_fmt(dist.p_pd1)}   PD2 = {_fmt(dist.p_pd2)}   "
            f"inconclusive = {_fmt(dist.p_inconclusive)}   leak = {_fmt(dist.p_leak)}"
        )

    outputs = {
        "x": cfg.x,
        "phi": cfg.phi,
        "xi": cfg.xi,
        "ps_max": p_best,
        "p_conclusive": p_conclusive,
    }
    report: dict = {
        "params": {"alpha": alpha, "p1": p1, "varphi": varphi, "x_override": args.x is not None},
        "config": {"x": cfg.x, "phi": cfg.phi, "varphi": cfg.varphi, "xi": cfg.xi},
        "ps_max": p_best,
        "regime": regime.value,
        "detection": {
            "state1": dist1.as_tuple(),
            "state2": dist2.as_tuple(),
        },
    }
    if args.trials > 0:
        mc = optics.monte_carlo(cfg, p1, args.trials, args.seed)
        freq = mc.n_conclusive / mc.n_trials
        sigma = math.sqrt(p_conclusive * (1.0 - p_conclusive) / mc.n_trials) or 1.0
        print(f"Monte Carlo (n = {mc.n_trials}, seed = {mc.seed}):")
        print(
            f"  PD1 = {mc.n_pd1}   PD2 = {mc.n_pd2}   inconclusive = {mc.n_inconclusive}   "
            f"leak = {mc.n_leak}   errors = {mc.n_errors}"
        )
        print(
            f"  conclusive frequency = {_fmt(freq)}   expected = {_fmt(p_conclusive)}   "
            f"deviation = {_fmt((freq - p_conclusive) / sigma)} sigma"
        )
        outputs.update({"n_conclusive": mc.n_conclusive, "n_errors": mc.n_errors})
        report["monte_carlo"] = {
            "n_trials": mc.n_trials,
            "seed": mc.seed,
            "n_pd1": mc.n_pd1,
            "n_pd2": mc.n_pd2,
            "n_inconclusive": mc.n_inconclusive,
            "n_leak": mc.n_leak,
            "n_errors": mc.n_errors,
        }
    if out is not None:
        out.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        print(f"report written to {out}")
    _record_run(
        "optics",
        {"alpha": alpha, "p1": p1, "varphi": varphi, "trials": args.trials,
         "x": None if args.x is None else cfg.x},
        outputs,
        args.seed if args.trials > 0 else None,
        out,
    )
    return EXIT_OK


# ------------------------------------------------------------------- sweep-x


def cmd_sweep_x(args) -> int:
    alpha = _angle(args.alpha, args.degrees)
    varphi = _angle(args.varphi, args.degrees)
    p1 = args.p1
    _require(0.0 < alpha <= math.pi / 2 + 1e-12, "--alpha must lie in (0, pi/2]")
    _require(0.0 <= p1 <= 1.0, "--p1 must lie in [0, 1]")
    _require(args.steps >= 2, "--steps must be at least 2")
    p2 = 1.0 - p1
    out = Path(args.out)
    spec = SweepSpec("x", 0.0, alpha, args.steps, {"alpha": alpha, "p1": p1, "varphi": varphi})

    rows = []
    for x in spec.grid():
        x = float(min(x, alpha))
        try:
            phi = optics.orthogonality_phi(alpha, x, varphi)
            sin_vp_sq = math.sin(varphi) ** 2
            q_s1 = math.cos(x) ** 2 * math.sin(phi) ** 2 + math.sin(x) ** 2 * sin_vp_sq
            q_s2 = math.cos(alpha - x) ** 2 * math.sin(phi) ** 2 + math.sin(alpha - x) ** 2 * sin_vp_sq
            ps = optics.success_probability_x(alpha, x, varphi, p1, p2)
            rows.append([_fmt(x), _fmt(ps), _fmt(q_s1), _fmt(q_s2), "0"])
        except optics.InfeasibleGeometryError:
            rows.append([_fmt(x), "", "", "", "1"])
    digest = _write_csv(out, ["x", "p_s", "q_s1", "q_s2", "infeasible"], rows)
    if args.svg:
        feasible = [r for r in rows if r[4] == "0"]
        _write_svg(
            out.with_suffix(".svg"),
            f"alpha = {_fmt(alpha)}, p1 = {_fmt(p1)}",
            "x",
            [r[0] for r in feasible],
            [("p_s", [r[1] for r in feasible]), ("q_s1", [r[2] for r in feasible]),
             ("q_s2", [r[3] for r in feasible])],
        )
    print(f"wrote {len(rows)} rows to {out}")
    _record_run(
        "sweep-x",
        {"alpha": alpha, "p1": p1, "varphi": varphi, "steps": args.steps, "out": str(out)},
        {"rows": len(rows), "csv_sha256": digest},
        None,
        out,
    )
    return EXIT_OK


# -------------------------------------------------------------- spdc-prepare


def cmd_spdc_prepare(args) -> int:
    lam = args.lambda1
    _require(0.0 <= lam <= 1.0, "--lambda1 must lie in [0, 1]")
    psi = qcore.prepare_spdc(lam)
    rho = qcore.partial_trace_idler(psi)
    mixed = qcore.eigendecompose(rho)
    labels = ("|hh>", "|hv>", "|vh>", "|vv>")
    terms = " + ".join(
        f"({_fmt_complex(complex(a))}){k}" for a, k in zip(psi.amps, labels) if abs(a) > 0
    )
    print(f"two-photon state: {terms}")
    print("signal density matrix after tracing out the idler:")
    for row in rho.entries:
        print("  [" + ", ".join(_fmt_complex(complex(v)) for v in row) + "]")
    print(f"spectrum: ({_fmt(mixed.lambda1)}, {_fmt(mixed.lambda2)})")
    _record_run(
        "spdc-prepare",
        {"lambda1": lam},
        {"lambda_min": mixed.lambda1, "lambda_max": mixed.lambda2},
        None,
        None,
    )
    return EXIT_OK


# ------------------------------------------------------------------- parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uqsd",
        description="Decompositions of rank-two mixed states and optimal state discrimination.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="print one gamma-decomposition")
    p.add_argument("--lambda1", type=float, required=True)
    p.add_argument("--gamma-sq", dest="gamma_sq", type=float, required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--degrees", action="store_true", help="interpret angles in degrees")
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("sweep-gamma", help="sweep |gamma|^2 at fixed lambda1")
    p.add_argument("--lambda1", type=float, required=True)
    p.add_argument("--steps", type=int, default=1001)
    p.add_argument("--out", required=True)
    p.add_argument("--svg", action="store_true", help="also write a line plot next to the CSV")
    p.set_defaults(handler=cmd_sweep_gamma)

    p = sub.add_parser("region-map", help="regime map over the (|gamma|^2, lambda1) plane")
    p.add_argument("--resolution", type=int, default=101)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_region_map)

    p = sub.add_parser("optics", help="optimize the circuit and optionally sample detections")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--varphi", type=float, default=math.pi / 2)
    p.add_argument("--x", type=float, default=None, help="override the asymmetry angle")
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write a JSON report here")
    p.add_argument("--degrees", action="store_true")
    p.set_defaults(handler=cmd_optics)

    p = sub.add_parser("sweep-x", help="sweep the asymmetry angle of the circuit")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--varphi", type=float, default=math.pi / 2)
    p.add_argument("--steps", type=int, default=1001)
    p.add_argument("--out", required=True)
    p.add_argument("--svg", action="store_true")
    p.add_argument("--degrees", action="store_true")
    p.set_defaults(handler=cmd_sweep_x)

    p = sub.add_parser("spdc-prepare", help="heralded preparation of the mixed state")
    p.add_argument("--lambda1", type=float, required=True)
    p.set_defaults(handler=cmd_spdc_prepare)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except _ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except optics.InfeasibleGeometryError as exc:
        print(f"infeasible geometry: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (dec.DegenerateDecompositionError, dec.InconsistentInputsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def run() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    run()
