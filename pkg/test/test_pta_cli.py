"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from pytxalloc.pytxalloc import run
from test.toy_cases import write_two_bus_files
from contextlib import redirect_stdout, redirect_stderr
import unittest
import tempfile
import json
import io
import os

__TITLE__ = "Testing pta command line"


def invoke(argv):
    """
    Returns (exit code, stdout, stderr)
    """
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(argv)
    return code, out.getvalue(), err.getvalue()


def read(directory, name):
    with open(os.path.join(directory, name), "r") as handle:
        return json.load(handle)


class TestPTACommandLine(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = self.tmp.name
        self.paths = write_two_bus_files(self.out)
        self.common = ["--case", self.paths["case.json"], "--scenarios", self.paths["scenarios.json"],
                       "--out", self.out, "--days", "2", "--discount-rate", "0", "--period-years", "1",
                       "--gap", "1e-6", "--no-logo"]

    def tearDown(self):
        self.tmp.cleanup()

    def test_full_flow(self):
        code, stdout, _ = invoke(["validate"] + self.common)
        self.assertEqual(code, 0)
        validation = json.loads(stdout)
        self.assertTrue(validation["ok"])
        self.assertEqual((validation["nodes"], validation["horizon"], validation["stage_boundary"]), (2, 2, 1))

        code, _, _ = invoke(["plan", "--export-lp", "model.lp"] + self.common)
        self.assertEqual(code, 0)
        plan = read(self.out, "plan.json")
        self.assertEqual(plan["plan"]["lines"], [{"node": "n0", "line": "AB", "increment": "q1"}])
        self.assertEqual(plan["plan"]["root"], "n0")
        self.assertTrue(os.path.isfile(os.path.join(self.out, "model.lp")))

        code, _, _ = invoke(["prices"] + self.common)
        self.assertEqual(code, 0)
        self.assertTrue(read(self.out, "kkt.json")["kkt"]["ok"])

        code, _, _ = invoke(["counterfactual"] + self.common)
        self.assertEqual(code, 0)
        cf = read(self.out, "counterfactual.json")
        entry = cf["counterfactuals"][0]
        self.assertEqual(entry["scope"], "portfolio")
        self.assertEqual(entry["option"], 2)
        self.assertEqual(entry["plan"]["lines"], [])
        self.assertGreater(entry["objective_delta"], 0.0)
        self.assertAlmostEqual(entry["objective_delta"], cf["reference_objective"] - entry["objective"], places=4)

        code, _, _ = invoke(["benefits"] + self.common)
        self.assertEqual(code, 0)
        self.assertEqual(read(self.out, "benefits.json")["classification_violations"], [])
        for name in ("load_benefits.csv", "gen_benefits.csv", "surplus_accounts.csv", "congestion_coverage.csv"):
            self.assertTrue(os.path.isfile(os.path.join(self.out, name)))

        code, _, _ = invoke(["allocate"] + self.common)
        self.assertEqual(code, 0)
        allocation = read(self.out, "allocation.json")
        self.assertEqual(allocation["policy"], "load-only")
        ratios = {p["participant"]: p["ratio"] for p in allocation["allocations"][0]["participants"]}
        self.assertAlmostEqual(ratios["B"], 100.0, places=6)
        self.assertAlmostEqual(ratios["A"], 0.0, places=6)
        self.assertTrue(os.path.isfile(os.path.join(self.out, "allocation_portfolio.csv")))

        code, _, _ = invoke(["sweep", "--plan", os.path.join(self.out, "plan.json"),
                             "--counter-plan", os.path.join(self.out, "counterfactual.json"),
                             "--ex-ante", os.path.join(self.out, "allocation.json"), "--representative"] + self.common)
        self.assertEqual(code, 0)
        sweep = read(self.out, "sweep.json")
        self.assertEqual(sweep["combinations"], 3)
        self.assertEqual(sweep["failed"], 0)
        self.assertTrue(os.path.isfile(os.path.join(self.out, "divergence.json")))

        code, stdout, _ = invoke(["report", "--out", self.out, "--no-logo"])
        self.assertEqual(code, 0)
        report = json.loads(stdout)
        self.assertEqual(report["lines"], plan["plan"]["lines"])
        self.assertTrue(report["sweep"]["all_positive"])
        self.assertEqual(report["sweep"]["combinations"], 3)
        self.assertEqual(report, read(self.out, "report.json"))

    def test_cluster(self):
        code, _, _ = invoke(["cluster"] + self.common + ["--days", "1"])
        self.assertEqual(code, 0)
        clustering = read(self.out, "clustering.json")
        self.assertEqual(clustering["blocks"], 24)
        self.assertAlmostEqual(clustering["total_weight"], 48.0)

    def test_input_errors(self):
        missing = os.path.join(self.out, "missing.json")
        code, _, stderr = invoke(["validate", "--case", missing, "--out", self.out, "--no-logo"])
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(stderr.strip().splitlines()[-1])["exit_code"], 2)
        code, _, _ = invoke(["plan"] + self.common + ["--gap", "1.5"])
        self.assertEqual(code, 2)
        code, _, _ = invoke(["counterfactual"] + self.common + ["--option", "5"])
        self.assertEqual(code, 2)
        self.assertFalse(os.path.isfile(os.path.join(self.out, "counterfactual.json")))
        with self.assertRaises(SystemExit):
            invoke(["nothing", "--no-logo"])

    def test_no_beneficiaries(self):
        code, _, _ = invoke(["fixtures", "--out", self.out, "--no-logo"])
        self.assertEqual(code, 0)
        code, _, stderr = invoke(["allocate", "--benefits", os.path.join(self.out, "fixtures.json"),
                                  "--scope", "no_beneficiaries", "--out", self.out, "--no-logo"])
        self.assertEqual(code, 3)
        self.assertEqual(json.loads(stderr.strip().splitlines()[-1])["exit_code"], 3)
        self.assertFalse(os.path.isfile(os.path.join(self.out, "allocation.json")))

    def test_fixture_allocation(self):
        invoke(["fixtures", "--out", self.out, "--no-logo"])
        fixtures = os.path.join(self.out, "fixtures.json")
        code, _, _ = invoke(["allocate", "--benefits", fixtures, "--scope", "all", "--out", self.out, "--no-logo"])
        self.assertEqual(code, 0)
        allocation = read(self.out, "allocation.json")
        portfolio = [a for a in allocation["allocations"] if a["scope"] == "portfolio"][0]
        ratios = {p["participant"]: round(p["ratio"], 2) for p in portfolio["participants"]}
        self.assertEqual(ratios["b1"], 57.17)
        self.assertEqual(ratios["b8"], 21.71)
        self.assertIn("b4", allocation["comparison"]["flagged"])
        with open(os.path.join(self.out, "allocation_portfolio.csv"), "r") as handle:
            self.assertIn("57.17", handle.read())

        code, _, _ = invoke(["allocate", "--benefits", fixtures, "--policy", "load+gen", "--out", self.out,
                             "--no-logo"])
        self.assertEqual(code, 0)
        entry = read(self.out, "allocation.json")["allocations"][0]
        self.assertAlmostEqual(entry["load_share"], 22.72, places=2)
        self.assertAlmostEqual(entry["gen_share"], 77.28, places=2)

    def test_infeasible_model(self):
        paths = write_two_bus_files(self.out, rps=0.5)
        code, _, stderr = invoke(["plan", "--case", paths["case.json"], "--scenarios", paths["scenarios.json"],
                                  "--out", self.out, "--days", "2", "--no-logo"])
        self.assertEqual(code, 4)
        self.assertEqual(json.loads(stderr.strip().splitlines()[-1])["exit_code"], 4)
        self.assertFalse(os.path.isfile(os.path.join(self.out, "plan.json")))


def test():
    print("=" * len(__TITLE__))
    print(__TITLE__)
    print("=" * len(__TITLE__))
    suite = unittest.TestLoader().loadTestsFromTestCase(TestPTACommandLine)
    unittest.TextTestRunner(verbosity=2).run(suite)
