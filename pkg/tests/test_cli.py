import csv
import json
import math

import numpy as np
import pytest

from uqsd import cli, optics, optimal_x


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    return header, rows


def column(rows, idx):
    return np.array([float(r[idx]) for r in rows])


@pytest.fixture(autouse=True)
def in_tmpdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


class TestDecompose:
    def test_basic(self, capsys):
        rc = cli.main(["decompose", "--lambda1", "0.3", "--gamma-sq", "0.5", "--theta", "0"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "p1 = 0.42" in out
        assert "-0.371390676354" in out

    def test_degenerate_routed(self, capsys):
        rc = cli.main(["decompose", "--lambda1", "0.5", "--gamma-sq", "0.3"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "degenerate" in out
        assert "p1 = 0.5" in out

    def test_spectral(self, capsys):
        rc = cli.main(["decompose", "--lambda1", "0.3", "--gamma-sq", "0"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "p1 = 0.7" in out
        assert "modulus = 0" in out

    def test_validation_exit_code(self, capsys):
        rc = cli.main(["decompose", "--lambda1", "1.5", "--gamma-sq", "0.5"])
        assert rc == 2
        assert "lambda1" in capsys.readouterr().err

    def test_degrees_flag(self, capsys):
        cli.main(["decompose", "--lambda1", "0.3", "--gamma-sq", "0.5", "--theta", "90", "--degrees"])
        out = capsys.readouterr().out
        assert "theta = 1.57079632679" in out


class TestSweepGamma:
    def test_schema_and_contracts(self, tmp_path):
        out = tmp_path / "s.csv"
        rc = cli.main(["sweep-gamma", "--lambda1", "0.1", "--steps", "1001", "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header == ["gamma_sq", "p1", "beta_mod", "p_s", "p_e"]
        assert len(rows) == 1001
        g = column(rows, 0)
        beta = column(rows, 2)
        assert beta.max() == pytest.approx(0.8, abs=1e-10)
        assert abs(g[np.argmax(beta)] - 0.1) <= 1e-3 + 1e-12

    def test_fig3_success_floor(self, tmp_path):
        out = tmp_path / "s.csv"
        cli.main(["sweep-gamma", "--lambda1", "0.11", "--steps", "1001", "--out", str(out)])
        _, rows = read_csv(out)
        g = column(rows, 0)
        ps = column(rows, 3)
        assert ps.min() == pytest.approx(0.22, abs=1e-10)
        assert abs(g[np.argmin(ps)] - 0.11) <= 1e-3 + 1e-12

    def test_degenerate_lambda_flat(self, tmp_path):
        out = tmp_path / "s.csv"
        cli.main(["sweep-gamma", "--lambda1", "0.5", "--steps", "101", "--out", str(out)])
        _, rows = read_csv(out)
        assert (column(rows, 3) == 1.0).all()
        assert (column(rows, 4) == 0.0).all()

    def test_byte_identical_rerun(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        cli.main(["sweep-gamma", "--lambda1", "0.3", "--steps", "501", "--out", str(out1)])
        cli.main(["sweep-gamma", "--lambda1", "0.3", "--steps", "501", "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_svg_written(self, tmp_path):
        out = tmp_path / "s.csv"
        cli.main(["sweep-gamma", "--lambda1", "0.3", "--steps", "51", "--out", str(out), "--svg"])
        svg = (tmp_path / "s.svg").read_text()
        assert svg.startswith("<svg") and "polyline" in svg

    def test_lambda_bounds(self, capsys):
        assert cli.main(["sweep-gamma", "--lambda1", "0", "--steps", "11", "--out", "x.csv"]) == 2

    def test_io_error(self, tmp_path):
        missing = tmp_path / "nope" / "x.csv"
        assert cli.main(["sweep-gamma", "--lambda1", "0.3", "--steps", "11", "--out", str(missing)]) == 4


class TestRegionMap:
    def test_map_contracts(self, tmp_path):
        out = tmp_path / "m.csv"
        res = 21
        rc = cli.main(["region-map", "--resolution", str(res), "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header == ["gamma_sq", "lambda1", "regime", "p_s"]
        assert len(rows) == res * res
        cells = {(r[0], r[1]): (r[2], float(r[3])) for r in rows}
        assert cells[("0.5", "0.5")] == ("BothConclusive", 1.0)
        # spectral column g = 0 has p_s = 1 everywhere
        for r in rows:
            if r[0] == "0":
                assert float(r[3]) == 1.0

    def test_mirror_symmetry_of_map(self, tmp_path):
        out = tmp_path / "m.csv"
        res = 11
        cli.main(["region-map", "--resolution", str(res), "--out", str(out)])
        _, rows = read_csv(out)
        grid = {}
        for r in rows:
            grid[(r[0], r[1])] = (r[2], float(r[3]))
        keys = sorted({r[0] for r in rows}, key=float)
        for i, g in enumerate(keys):
            for j, lam in enumerate(keys):
                mg, mlam = keys[res - 1 - i], keys[res - 1 - j]
                regime, ps = grid[(g, lam)]
                m_regime, m_ps = grid[(mg, mlam)]
                assert regime == m_regime
                assert ps == pytest.approx(m_ps, abs=1e-11)

    def test_regime_boundary_matches_threshold(self, tmp_path):
        out = tmp_path / "m.csv"
        res = 101
        cli.main(["region-map", "--resolution", str(res), "--out", str(out)])
        _, rows = read_csv(out)
        # fixed lambda1 row: regime flips exactly where |beta| crosses the
        # prior-ratio threshold computed independently
        lam = 0.2
        row = [r for r in rows if abs(float(r[1]) - lam) < 1e-12]
        assert len(row) == res
        from uqsd import DecompositionParameter, decomposition_overlap, decomposition_probabilities

        for r in row:
            g_sq = float(r[0])
            p1, p2 = decomposition_probabilities(lam, math.sqrt(g_sq))
            beta = abs(decomposition_overlap(lam, DecompositionParameter(math.sqrt(g_sq))))
            threshold = math.sqrt(min(p1, p2) / max(p1, p2))
            expected = "BothConclusive" if beta <= threshold else (
                "OnlyState1" if p1 > p2 else "OnlyState2"
            )
            assert r[2] == expected

    def test_resolution_bounds(self):
        assert cli.main(["region-map", "--resolution", "5", "--out", "m.csv"]) == 2


class TestOptics:
    def test_report(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        rc = cli.main([
            "optics", "--alpha", str(math.pi / 4), "--p1", "0.6",
            "--trials", "20000", "--seed", "11", "--out", str(out),
        ])
        assert rc == 0
        text = capsys.readouterr().out
        assert "ps_max   = 0.307179676972" in text
        assert "errors = 0" in text
        report = json.loads(out.read_text())
        assert report["monte_carlo"]["n_errors"] == 0
        assert report["config"]["x"] == pytest.approx(0.6319143123750715, abs=1e-12)

    def test_seeded_rerun_identical(self, tmp_path):
        args = ["optics", "--alpha", "1.0", "--p1", "0.3", "--trials", "5000", "--seed", "42"]
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        cli.main(args + ["--out", str(out1)])
        cli.main(args + ["--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_x_override(self, capsys):
        rc = cli.main(["optics", "--alpha", "1.0", "--p1", "0.5", "--x", "0.3"])
        assert rc == 0
        assert "(override)" in capsys.readouterr().out

    def test_degrees(self, capsys):
        rc = cli.main(["optics", "--alpha", "60", "--p1", "0.1", "--degrees"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "x        = 0   (optimal)" in out  # edge regime at alpha = pi/3

    def test_validation(self, capsys):
        assert cli.main(["optics", "--alpha", "2.0", "--p1", "0.5"]) == 2
        assert cli.main(["optics", "--alpha", "1.0", "--p1", "1.5"]) == 2

    def test_infeasible_exit_code(self, monkeypatch, capsys):
        def boom(*args, **kwargs):
            raise optics.InfeasibleGeometryError("forced")

        monkeypatch.setattr(optics, "orthogonality_phi", boom)
        monkeypatch.setattr(cli.optics, "optimal_config", lambda *a, **k: boom())
        assert cli.main(["optics", "--alpha", "1.0", "--p1", "0.5"]) == 3


class TestSweepX:
    def test_schema_and_argmax(self, tmp_path):
        steps = 501
        for alpha, p1 in ((math.pi / 3, 0.1), (math.pi / 3, 0.3), (math.pi / 4, 0.6), (math.pi / 4, 0.8)):
            out = tmp_path / f"x_{p1}.csv"
            rc = cli.main([
                "sweep-x", "--alpha", str(alpha), "--p1", str(p1),
                "--steps", str(steps), "--out", str(out),
            ])
            assert rc == 0
            header, rows = read_csv(out)
            assert header == ["x", "p_s", "q_s1", "q_s2", "infeasible"]
            assert all(r[4] == "0" for r in rows)
            xs = column(rows, 0)
            ps = column(rows, 1)
            step = alpha / (steps - 1)
            assert abs(xs[np.argmax(ps)] - optimal_x(alpha, p1, 1 - p1)) <= step + 1e-12

    def test_midpoint_prior_independent(self, tmp_path):
        alpha, steps = math.pi / 3, 101
        values = []
        for p1 in ("0.1", "0.3"):
            out = tmp_path / f"m_{p1}.csv"
            cli.main(["sweep-x", "--alpha", str(alpha), "--p1", p1, "--steps", str(steps), "--out", str(out)])
            _, rows = read_csv(out)
            values.append(rows[steps // 2][1])
        assert values[0] == values[1]

    def test_x_zero_row(self, tmp_path):
        out = tmp_path / "z.csv"
        cli.main(["sweep-x", "--alpha", "1.0", "--p1", "0.3", "--steps", "11", "--out", str(out)])
        _, rows = read_csv(out)
        assert float(rows[0][2]) == 0.0  # q_s1 vanishes at x = 0
        assert float(rows[0][1]) == pytest.approx(0.7 * math.sin(1.0) ** 2, abs=1e-10)


class TestSpdcPrepare:
    def test_output(self, capsys):
        rc = cli.main(["spdc-prepare", "--lambda1", "0.3"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "|hh>" in out and "|vv>" in out
        assert "spectrum: (0.3, 0.7)" in out

    def test_validation(self):
        assert cli.main(["spdc-prepare", "--lambda1", "-0.2"]) == 2


class TestRunRecords:
    def test_appended_and_parseable(self, tmp_path):
        cli.main(["decompose", "--lambda1", "0.3", "--gamma-sq", "0.5"])
        cli.main(["spdc-prepare", "--lambda1", "0.4"])
        records = [json.loads(line) for line in (tmp_path / "runs.jsonl").read_text().splitlines()]
        assert [r["command"] for r in records] == ["decompose", "spdc-prepare"]
        assert all("timestamp" in r for r in records)

    def test_seed_recorded(self, tmp_path):
        cli.main(["optics", "--alpha", "1.0", "--p1", "0.5", "--trials", "100", "--seed", "77"])
        record = json.loads((tmp_path / "runs.jsonl").read_text().splitlines()[-1])
        assert record["seed"] == 77
