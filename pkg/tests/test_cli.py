"""Tests for the command-line interface."""

import json
import math
import re

import pytest

from crossover_coverage import CoverageQuery, coverage_probability
from crossover_coverage.cli import main

import crossover_coverage.simulate


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    return header, rows


class TestCoverageCurve:
    def test_default_curve(self, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        assert main(["coverage-curve", "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == ["gamma", "coverage"]
        assert len(rows) == 801
        gammas = [r[0] for r in rows]
        covs = [r[1] for r in rows]
        assert gammas[0] == -8.0 and gammas[-1] == 8.0
        assert abs(covs[0] - 0.95) <= 1e-4
        assert abs(covs[-1] - 0.95) <= 1e-4
        # symmetric grid, symmetric curve
        asym = max(abs(a - b) for a, b in zip(covs, covs[::-1]))
        assert asym <= 1e-10
        assert min(covs) < 0.50
        assert abs(min(covs) - 0.4711) <= 1e-3
        stdout = capsys.readouterr().out
        assert "grid minimum" in stdout

    def test_rerun_byte_identical(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        args = ["coverage-curve", "--steps", "41", "--gamma-min", "-4",
                "--gamma-max", "4"]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_round_trip_reevaluation(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert main(["coverage-curve", "--steps", "21", "--gamma-min", "-2",
                     "--gamma-max", "2", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        for gamma, stored in rows:
            again = coverage_probability(CoverageQuery(gamma, 0.1, 0.05)).value
            assert abs(again - stored) <= 1e-12

    def test_two_step_grid(self, tmp_path):
        out = tmp_path / "two.csv"
        assert main(["coverage-curve", "--steps", "2", "--gamma-min", "0",
                     "--gamma-max", "1", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 2

    def test_manifest_written(self, tmp_path):
        out = tmp_path / "curve.csv"
        main(["coverage-curve", "--steps", "5", "--gamma-min", "0",
              "--gamma-max", "1", "--out", str(out)])
        manifest = json.loads((tmp_path / "curve.csv.manifest.json").read_text())
        assert manifest["command"] == "coverage-curve"
        assert manifest["parameters"]["steps"] == 5
        assert "version" in manifest and "timestamp" in manifest

    def test_invalid_level_is_usage_error(self, tmp_path, capsys):
        code = main(["coverage-curve", "--alpha", "1.5",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_unwritable_path_is_io_error(self, tmp_path, capsys):
        code = main(["coverage-curve", "--steps", "2", "--gamma-min", "0",
                     "--gamma-max", "1",
                     "--out", str(tmp_path / "no" / "such" / "dir.csv")])
        assert code == 3
        assert "I/O error" in capsys.readouterr().err


class TestMinCoverage:
    def test_headline_pair(self, capsys):
        assert main(["min-coverage", "--alpha1", "0.1", "--alpha", "0.05"]) == 0
        stdout = capsys.readouterr().out
        assert "0.4711" in stdout

    def test_deficits_positive(self, tmp_path):
        out = tmp_path / "table.csv"
        assert main(["min-coverage", "--alpha1", "0.05", "0.1",
                     "--alpha", "0.05", "0.1", "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == ["alpha1", "alpha", "gamma_star", "min_coverage",
                          "nominal", "deficit"]
        assert len(rows) == 4
        for row in rows:
            assert row[5] > 0.0
            assert row[2] > 0.0

    def test_duplicates_deduped_with_warning(self, capsys):
        assert main(["min-coverage", "--alpha1", "0.1", "0.1",
                     "--alpha", "0.05"]) == 0
        captured = capsys.readouterr()
        assert "duplicate" in captured.err
        assert len([l for l in captured.out.splitlines() if l.strip()]) == 2


class TestSimulate:
    ARGS = ["simulate", "--n1", "2", "--n2", "2", "--theta", "0.7",
            "--psi", "0", "--reps", "20000", "--seed", "5"]

    def test_null_configuration(self, capsys):
        assert main(self.ARGS) == 0
        stdout = capsys.readouterr().out
        accept = float(re.search(r"accept rate: ([0-9.]+)", stdout).group(1))
        assert abs(accept - 0.9) <= 4.0 * math.sqrt(0.9 * 0.1 / 20000)
        assert "result: PASS" in stdout

    def test_fixed_seed_identical_report(self, capsys):
        assert main(self.ARGS) == 0
        first = capsys.readouterr().out
        assert main(self.ARGS) == 0
        second = capsys.readouterr().out
        assert first == second

    def test_sample_size_invariance(self, capsys):
        # Same gamma realized with n=10 and n=1000; the analytic value
        # must be identical and the empirical estimates consistent.
        reports = []
        for n, psi in ((10, 0.6708203932499369), (1000, 0.0670820393249937)):
            code = main(["simulate", "--n1", str(n), "--n2", str(n),
                         "--theta", "0.5", "--psi", repr(psi),
                         "--reps", "3000", "--seed", "8"])
            assert code == 0
            reports.append(capsys.readouterr().out)
        analytic = [re.search(r"analytic coverage: ([0-9.]+)", r).group(1)
                    for r in reports]
        assert analytic[0] == analytic[1]
        emp = [(float(m.group(1)), float(m.group(2))) for m in
               (re.search(r"empirical coverage: ([0-9.]+) \+/- ([0-9.]+)", r)
                for r in reports)]
        gap = abs(emp[0][0] - emp[1][0])
        assert gap <= 5.0 * math.hypot(emp[0][1], emp[1][1])

    def test_bad_domain_exits_2(self, capsys):
        code = main(["simulate", "--sigma-e2", "-1", "--reps", "10"])
        assert code == 2


class TestEfficiency:
    def test_boundary_equality(self, capsys):
        assert main(["efficiency", "--sigma-s2", "4.5", "--sigma-e2", "1.0",
                     "--n", "10"]) == 0
        stdout = capsys.readouterr().out
        assert "crossover preferred: yes" in stdout
        assert "sigma_s2 >= 4.5 * sigma_e2: yes" in stdout

    def test_zero_subject_variance_ratio(self, capsys):
        assert main(["efficiency", "--sigma-s2", "0", "--n", "10"]) == 0
        stdout = capsys.readouterr().out
        assert "variance ratio (crossover / randomized): 5.500000" in stdout
        assert "crossover preferred: no" in stdout

    def test_n_does_not_change_preference(self, capsys):
        verdicts = []
        for n in ("2", "50"):
            main(["efficiency", "--sigma-s2", "2.0", "--n", n])
            verdicts.append("crossover preferred: no"
                            in capsys.readouterr().out)
        assert verdicts[0] == verdicts[1]


class TestValidate:
    def test_smoke_run_passes(self, capsys):
        assert main(["validate", "--reps", "2000", "--seed", "1729"]) == 0
        stdout = capsys.readouterr().out
        assert "failures: 0" in stdout
        assert "FAIL" not in stdout

    def test_corrupted_estimator_fails(self, capsys, monkeypatch):
        # Sensitivity check: a wrong coefficient in the pooled estimator
        # must trip the suite.
        monkeypatch.setattr(
            crossover_coverage.simulate, "pooled_effect_estimate",
            lambda d1, d2, d3, d4: 0.3 * (d1 - d2 + d3 - d4))
        assert main(["validate", "--reps", "2000", "--seed", "1729"]) == 1
        assert "FAIL" in capsys.readouterr().out


class TestUsage:
    def test_unknown_command(self):
        with pytest.raises(SystemExit) as exc:
            main(["no-such-command"])
        assert exc.value.code == 2

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
