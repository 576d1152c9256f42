"""End-to-end checks of the sislab command-line tool: exit codes, outputs, report schema."""

import json
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema

SISLAB = Path(os.environ.get("SISLAB_BIN", "sislab"))
SCHEMA = Path(__file__).resolve().parents[2] / "schemas" / "analysis_report.schema.json"


def run(*args, cwd=None):
    return subprocess.run([str(SISLAB), *map(str, args)], cwd=cwd, capture_output=True,
                          text=True, timeout=300)


class Cli(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory(prefix="sislab-cli-")
        self.dir = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def config(self, name, body):
        path = self.dir / name
        path.write_text(json.dumps(body))
        return path

    def analyze_hat(self, out):
        cfg = self.config("hat.json", {"generators": [{"form": "bspline", "order": 1}],
                                       "M": 64, "K": 32})
        r = run("analyze", "--config", cfg, "--s", 0, "--output-dir", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        return out / "analysis_s0.json"

    def test_analyze_hat_bounds_and_schema(self):
        report_path = self.analyze_hat(self.dir / "out")
        report = json.loads(report_path.read_text())
        jsonschema.validate(report, json.loads(SCHEMA.read_text()))
        self.assertTrue(report["is_frame"])
        self.assertAlmostEqual(report["frame_bounds"]["A"], 1 / 3, delta=1e-3)
        self.assertAlmostEqual(report["frame_bounds"]["B"], 1.0, delta=1e-3)
        self.assertEqual(report["dimension"]["histogram"], [0, 64])

    def test_export_is_byte_identical_and_csv_has_one_row_per_point(self):
        report_path = self.analyze_hat(self.dir / "out")
        again = self.dir / "again.json"
        r = run("export", "--report", report_path, "--format", "json", "--out", again)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(again.read_bytes(), report_path.read_bytes())

        csv = self.dir / "eigen.csv"
        r = run("export", "--report", report_path, "--format", "csv", "--out", csv)
        self.assertEqual(r.returncode, 0, r.stderr)
        lines = csv.read_text().splitlines()
        self.assertEqual(lines[0], "t,lambda_1")
        self.assertEqual(len(lines) - 1, 64)
        self.assertEqual(csv.read_bytes(), (self.dir / "out" / "eigen_s0.csv").read_bytes())

        r = run("export", "--report", report_path, "--format", "xml", "--out", self.dir / "x")
        self.assertEqual(r.returncode, 64)

    def test_unsound_truncation_exits_3(self):
        cfg = self.config("box.json", {"generators": [{"form": "bspline", "order": 0}],
                                       "s": [1], "transport": False, "M": 16, "K": 8})
        out = self.dir / "out"
        r = run("analyze", "--config", cfg, "--output-dir", out)
        self.assertEqual(r.returncode, 3, r.stderr)
        record = json.loads((out / "error.json").read_text())
        self.assertEqual(record["error"], "unsound_truncation")
        self.assertEqual(record["exit_code"], 3)

    def test_zero_generator_is_refused_with_exit_2(self):
        xi = [0.5 * i for i in range(-12, 13)]
        table = self.dir / "zero.csv"
        table.write_text(f"# n=1 decay=4 count={len(xi)}\n" +
                         "".join(f"{x!r},0,0\n" for x in xi))
        cfg = self.config("zero.json", {"generators": [{"form": "tabulated", "path": "zero.csv"}],
                                        "M": 16, "K": 4})
        out = self.dir / "out"
        r = run("analyze", "--config", cfg, "--output-dir", out)
        self.assertEqual(r.returncode, 2, r.stderr)
        record = json.loads((out / "error.json").read_text())
        self.assertEqual(record["error"], "degenerate_system")

    def test_usage_errors_exit_64(self):
        self.assertEqual(run("analyze", "--no-such-flag").returncode, 64)
        self.assertEqual(run().returncode, 64)
        bad = self.config("bad.json", {"M": 1})
        self.assertEqual(run("analyze", "--config", bad).returncode, 64)
        unknown = self.config("unknown.json", {"colour": "blue"})
        r = run("analyze", "--config", unknown)
        self.assertEqual(r.returncode, 64)
        self.assertEqual(json.loads(r.stderr.strip().splitlines()[-1])["error"], "usage")

    def test_verify_passes_and_detects_injected_gramian_perturbation(self):
        out = self.dir / "v"
        clean = run("verify", "--s", 0, "--output-dir", out)
        self.assertEqual(clean.returncode, 0, clean.stdout + clean.stderr)
        report = json.loads((out / "verify_report.json").read_text())
        self.assertTrue(all(c["pass"] for c in report["checks"]))

        bad = run("verify", "--s", 0, "--output-dir", out, "--perturb-gramian", 1e-3)
        self.assertEqual(bad.returncode, 1)
        failing = [line for line in bad.stdout.splitlines() if line.startswith("FAIL")]
        self.assertTrue(failing)
        self.assertTrue(all(" oracle/" in line for line in failing), failing)
        self.assertIn("invariant_failed", bad.stderr)

    def test_analysis_is_reproducible_across_thread_counts(self):
        a = self.analyze_hat(self.dir / "a")
        cfg = self.dir / "hat.json"
        r = run("analyze", "--config", cfg, "--s", 0, "--threads", 3, "--output-dir",
                self.dir / "b")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(a.read_bytes(), (self.dir / "b" / "analysis_s0.json").read_bytes())


if __name__ == "__main__":
    if len(sys.argv) > 1:
        SISLAB = Path(sys.argv.pop(1))
    unittest.main(verbosity=2)
