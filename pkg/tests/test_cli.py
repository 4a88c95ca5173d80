"""CLI flows, exit codes, and structured errors."""

import json

import pytest

from assortopt.cli import main
from assortopt.io import load_report


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGenSolveExactFlow:
    def test_end_to_end(self, tmp_path, capsys):
        inst_path = tmp_path / "inst.json"
        report_path = tmp_path / "report.json"

        code, _, _ = run_cli(capsys, "gen", "--N", "3", "--seed", "7", "-o", str(inst_path))
        assert code == 0

        code, _, _ = run_cli(
            capsys, "solve", str(inst_path), "--S", "0", "--C", "2", "--b", "3",
            "--trace", "--exact", "-o", str(report_path),
        )
        assert code == 0
        report = load_report(str(report_path))
        assert float(report["gap"]) <= 1e-12  # exact oracle finds the optimum here

        code, out, _ = run_cli(capsys, "exact", str(inst_path), "--C", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["solvers_agree"] is True
        assert float(doc["brute_force"]["revenue"]) == float(
            report["exact"]["revenue"]
        )

    def test_solve_revenue_matches_exact_subcommand(self, tmp_path, capsys):
        inst_path = tmp_path / "inst.json"
        run_cli(capsys, "gen", "--N", "6", "--seed", "123", "-o", str(inst_path))
        code, out, _ = run_cli(capsys, "solve", str(inst_path), "--C", "3")
        assert code == 0
        solve_doc = json.loads(out)
        code, out, _ = run_cli(capsys, "exact", str(inst_path), "--C", "3")
        exact_doc = json.loads(out)
        assert float(solve_doc["result"]["best_oracle_revenue"]) == pytest.approx(
            float(exact_doc["brute_force"]["revenue"]), rel=1e-9
        )


class TestExitCodes:
    def test_missing_file_is_io_error(self, capsys):
        code, _, err = run_cli(capsys, "solve", "/nonexistent/file.json", "--C", "2")
        assert code == 5
        assert json.loads(err)["error"]["code"] == "io"

    def test_invalid_instance_is_validation_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({
            "schema_version": "1",
            "products": [
                {"id": 1, "weight": "1.0", "price": "1.0"},
                {"id": 1, "weight": "2.0", "price": "2.0"},
            ],
        }))
        code, _, err = run_cli(capsys, "solve", str(bad), "--C", "1")
        assert code == 3
        assert json.loads(err)["error"]["code"] == "duplicate-id"

    def test_bad_config_is_validation_error(self, tmp_path, capsys):
        inst_path = tmp_path / "inst.json"
        run_cli(capsys, "gen", "--N", "3", "--seed", "1", "-o", str(inst_path))
        code, _, err = run_cli(capsys, "solve", str(inst_path), "--S", "3", "--C", "2")
        assert code == 3
        assert json.loads(err)["error"]["code"] == "bad-config"

    def test_usage_error_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["definitely-not-a-command"])
        assert exc.value.code == 2


class TestVerify:
    def make_report(self, tmp_path, capsys, *extra):
        inst_path = tmp_path / "inst.json"
        report_path = tmp_path / "report.json"
        run_cli(capsys, "gen", "--N", "6", "--seed", "21", "-o", str(inst_path))
        code, _, _ = run_cli(
            capsys, "solve", str(inst_path), "--C", "3", "--trace", *extra,
            "-o", str(report_path),
        )
        assert code == 0
        return report_path

    def test_verify_passes_on_real_report(self, tmp_path, capsys):
        report_path = self.make_report(tmp_path, capsys)
        code, out, _ = run_cli(capsys, "verify", str(report_path))
        assert code == 0
        assert out.startswith("verify PASS")

    def test_verify_passes_on_noisy_report(self, tmp_path, capsys):
        report_path = self.make_report(
            tmp_path, capsys, "--noise-mode", "seeded-uniform", "--eps", "0.01", "--seed", "5"
        )
        code, out, _ = run_cli(capsys, "verify", str(report_path))
        assert code == 0
        assert out.startswith("verify PASS")

    def test_verify_catches_tampered_revenue(self, tmp_path, capsys):
        report_path = self.make_report(tmp_path, capsys)
        doc = json.loads(report_path.read_text())
        doc["result"]["best_oracle_revenue"] = repr(
            float(doc["result"]["best_oracle_revenue"]) + 0.5
        )
        report_path.write_text(json.dumps(doc))
        code, out, err = run_cli(capsys, "verify", str(report_path))
        assert code == 4
        assert "FAIL" in out
        assert json.loads(err)["error"]["code"] == "assertion-failure"

    def test_verify_catches_tampered_trace(self, tmp_path, capsys):
        report_path = self.make_report(tmp_path, capsys)
        doc = json.loads(report_path.read_text())
        # claim a different assortment was reached at the first recorded step
        for entry in doc["result"]["traces"]:
            for record in entry["records"]:
                if record["action"] in ("add", "exchange"):
                    record["assortment_after"] = [max(record["pool_before"])]
                    break
        report_path.write_text(json.dumps(doc))
        code, _, _ = run_cli(capsys, "verify", str(report_path))
        assert code == 4


class TestBench:
    def test_tiny_full_grid(self, capsys, tmp_path):
        out_path = tmp_path / "bench.json"
        code, out, _ = run_cli(
            capsys, "bench", "--N", "5", "--C", "2", "--eps", "0.0", "0.01",
            "--seeds", "3", "-o", str(out_path),
        )
        assert code == 0
        assert "call-count violations: 0" in out
        doc = json.loads(out_path.read_text())
        assert doc["summary"]["call_violations"] == 0

    def test_theorem1_suite_reports_full_pass_rate(self, capsys):
        code, out, _ = run_cli(
            capsys, "bench", "--suite", "theorem1", "--N", "5", "6", "--C", "2", "--seeds", "4"
        )
        assert code == 0
        assert "exact recovery pass rate: 100.00% (8/8)" in out
