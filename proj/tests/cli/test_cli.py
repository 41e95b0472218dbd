"""End-to-end checks of the topoiga command-line driver.

Usage: test_cli.py <topoiga executable> <report schema>
"""
import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

CLI = ""
SCHEMA = ""


def write_voxels(path, rows, spacing):
    ny, nx = len(rows), len(rows[0])
    with open(path, "w") as f:
        f.write("TPIVOX 1\nndim 2\ndims %d %d\n" % (nx, ny))
        f.write("spacing %r %r\ntype u8\nencoding ascii\ndata\n" % (spacing, spacing))
        for row in rows:
            f.write(" ".join("255" if c == "1" else "0" for c in row) + "\n")


def disk(n, r):
    c = (n - 1) / 2.0
    return ["".join("1" if math.hypot(i - c, j - c) <= r else "0" for i in range(n)) for j in range(n)]


def frame(n):
    # Solid band spanning bottom to top, with a hole in the middle.
    rows = []
    for j in range(n):
        row = ""
        for i in range(n):
            band = n // 4 <= i < 3 * n // 4
            hole = 3 * n // 8 <= j < 5 * n // 8 and 3 * n // 8 <= i < 5 * n // 8
            row += "1" if band and not hole else "0"
        rows.append(row)
    return rows


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.disk = os.path.join(cls.tmp.name, "disk.tpv")
        cls.frame = os.path.join(cls.tmp.name, "frame.tpv")
        write_voxels(cls.disk, disk(24, 7.5), 1.0 / 24)
        write_voxels(cls.frame, frame(24), 1.0 / 24)
        with open(SCHEMA) as f:
            cls.schema = json.load(f)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def run_cli(self, *args, expect=0):
        p = subprocess.run([CLI, *args], capture_output=True, text=True, timeout=300)
        self.assertEqual(p.returncode, expect, p.stderr)
        return p

    def out_dir(self, name):
        return os.path.join(self.tmp.name, name)

    def test_ingest_info(self):
        info = json.loads(self.run_cli("ingest-info", self.disk).stdout)
        self.assertEqual(info["ndim"], 2)
        self.assertEqual(info["dims"], [24, 24])

    def test_segment(self):
        seg = json.loads(self.run_cli("segment", self.disk, "--output-dir", self.out_dir("seg")).stdout)
        self.assertEqual(seg["regions"], 1)
        self.assertEqual(seg["chi_multiset"], {"1": 1})
        self.assertTrue(os.path.isfile(os.path.join(self.out_dir("seg"), "segmentation.tpv")))

    def test_stages(self):
        for stage in ("detect", "refine", "tessellate"):
            with self.subTest(stage=stage):
                out = self.out_dir(stage)
                p = self.run_cli(stage, self.disk, "--output-dir", out)
                self.assertIsInstance(json.loads(p.stdout), dict)
                self.assertTrue(os.listdir(out))

    def test_pipeline_disk_needs_no_refinement(self):
        out = self.out_dir("pipe_disk")
        self.run_cli("pipeline", self.disk, "--output-dir", out)
        with open(os.path.join(out, "report.json")) as f:
            report = json.load(f)
        jsonschema.validate(report, self.schema)
        self.assertEqual(report["topology"]["passes"], 0)
        self.assertTrue(report["topology"]["converged"])
        self.assertEqual(report["solver"]["kind"], "none")
        self.assertGreater(report["tessellation"]["volume"], 0.0)

    def test_pipeline_elasticity_is_deterministic(self):
        csv = []
        for k in range(2):
            out = self.out_dir("pipe_el%d" % k)
            self.run_cli("pipeline", self.frame, "--output-dir", out, "--solver", "elasticity",
                         "--compare", "true", "--mesh", "8")
            with open(os.path.join(out, "report.json")) as f:
                report = json.load(f)
            jsonschema.validate(report, self.schema)
            self.assertEqual(report["solver"]["qoi"], "effective_modulus")
            self.assertEqual({r["variant"] for r in report["solver"]["runs"]}, {"with_fix", "without_fix"})
            for r in report["solver"]["runs"]:
                self.assertGreater(r["qoi"], 0.0)
            with open(os.path.join(out, "qoi.csv"), "rb") as f:
                csv.append(f.read())
        self.assertEqual(csv[0], csv[1])

    def test_config_file_and_set(self):
        cfg = os.path.join(self.tmp.name, "run.cfg")
        with open(cfg, "w") as f:
            f.write("# comment\nmesh = 8\nsolver = stokes\n")
        out = self.out_dir("pipe_cfg")
        self.run_cli("pipeline", self.frame, "-c", cfg, "--set", "solver=none", "--output-dir", out)
        with open(os.path.join(out, "report.json")) as f:
            report = json.load(f)
        self.assertEqual(report["parameters"]["mesh"], "8")
        self.assertEqual(report["solver"]["kind"], "none")

    def test_missing_input(self):
        p = self.run_cli("pipeline", os.path.join(self.tmp.name, "absent.tpv"), expect=5)
        self.assertTrue(p.stderr.startswith("topoiga:"))

    def test_malformed_input(self):
        bad = os.path.join(self.tmp.name, "bad.tpv")
        with open(bad, "w") as f:
            f.write("TPIVOX 1\nndim 2\ndims 2 2\n")
        p = self.run_cli("ingest-info", bad, expect=2)
        self.assertTrue(p.stderr.startswith("topoiga:"))

    def test_unknown_key(self):
        p = self.run_cli("pipeline", self.disk, "--set", "bogus=1", expect=2)
        self.assertIn("bogus", p.stderr)

    def test_analyze_kernel(self):
        out = self.out_dir("kernel")
        res = json.loads(self.run_cli("analyze-kernel", "-p", "3", "--mesh-size", "0.1", "-o", out).stdout)
        self.assertIsInstance(res, dict)
        self.assertTrue(os.listdir(out))


if __name__ == "__main__":
    CLI, SCHEMA = sys.argv[1], sys.argv[2]
    unittest.main(argv=sys.argv[:1], verbosity=2)
