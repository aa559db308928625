"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from pytxalloc.core.pta_allocation import (allocate_load_only, allocate_load_and_gen, compensate_losers,
                                           benefit_cost_ratios, compare_scopes, participant_label)
from pytxalloc.core.pta_fixtures import fixture_sets, split_key, EXPECTED, BUSES
from pytxalloc.core.errors import PTANoBeneficiaries, PTAInvalidArgument
import unittest

__TITLE__ = "Testing beneficiaries-pay allocation"

FIXTURES = fixture_sets()


def generation():
    gen = {split_key(k): v for k, v in FIXTURES["generation"]["gen"].items()}
    existing = {split_key(k): v for k, v in FIXTURES["generation"]["existing"].items()}
    return gen, existing


class TestPTALoadOnly(unittest.TestCase):

    def test_portfolio_ratios(self):
        report = allocate_load_only(FIXTURES["portfolio"]["load"])
        for bus, expected in zip(BUSES, EXPECTED["portfolio"]):
            self.assertAlmostEqual(report.ratio(bus), expected, delta=0.01)
        self.assertAlmostEqual(sum(report.ratios.values()), 100.0, places=9)

    def test_single_project_ratios(self):
        report = allocate_load_only(FIXTURES["projects"]["l2"]["load"], scope="project:l2")
        for bus, expected in zip(BUSES, EXPECTED["l2"]):
            self.assertAlmostEqual(report.ratio(bus), expected, delta=0.01)

    def test_losers_pay_nothing(self):
        report = allocate_load_only(FIXTURES["portfolio"]["load"], total_cost=100.0)
        for bus, delta in FIXTURES["portfolio"]["load"].items():
            if delta <= 0:
                self.assertEqual(report.ratio(bus), 0.0)
                self.assertEqual(report.allocated[bus], 0.0)
        self.assertAlmostEqual(sum(report.allocated.values()), 100.0)

    def test_no_beneficiaries(self):
        with self.assertRaises(PTANoBeneficiaries) as ctx:
            allocate_load_only(FIXTURES["no_beneficiaries"]["load"])
        self.assertEqual(ctx.exception.exit_code, 3)
        with self.assertRaises(PTANoBeneficiaries):
            allocate_load_only({"b1": 0.0, "b2": 0.0})

    def test_table_layout(self):
        table = allocate_load_only(FIXTURES["portfolio"]["load"]).as_table()
        self.assertEqual(list(table.index), ["load"])
        self.assertEqual(list(table.columns), list(BUSES) + ["sum"])
        self.assertAlmostEqual(table.loc["load", "sum"], 100.0)


class TestPTALoadAndGeneration(unittest.TestCase):

    def test_shares_of_the_pool(self):
        gen, existing = generation()
        report = allocate_load_and_gen(FIXTURES["portfolio"]["load"], gen, existing)
        self.assertAlmostEqual(report.load_share, EXPECTED["load_share"], delta=0.01)
        self.assertAlmostEqual(report.gen_share, EXPECTED["gen_share"], delta=0.01)
        self.assertAlmostEqual(report.load_share + report.gen_share, 100.0, places=9)
        self.assertEqual(report.ratio(("b1", "fleet")), 0.0)

    def test_benefit_scales_with_existing_capacity(self):
        report = allocate_load_and_gen({"b1": 10.0}, {("b1", "gas"): 2.0}, {("b1", "gas"): 5.0})
        self.assertEqual(report.benefits[("b1", "gas")], 10.0)
        self.assertAlmostEqual(report.ratio("b1"), 50.0)

    def test_table_rows_per_technology(self):
        gen, existing = generation()
        table = allocate_load_and_gen(FIXTURES["portfolio"]["load"], gen, existing).as_table()
        self.assertEqual(list(table.index), ["load", "fleet"])
        self.assertAlmostEqual(table["sum"].sum(), 100.0)

    def test_bad_generator_keys(self):
        with self.assertRaises(PTAInvalidArgument):
            allocate_load_and_gen({"b1": 1.0}, {"b1": 1.0}, {})
        with self.assertRaises(PTAInvalidArgument):
            allocate_load_and_gen({"b1": 1.0}, {("b1", "gas"): 1.0}, {("b1", "gas"): -1.0})


class TestPTACostAndScopes(unittest.TestCase):

    def project_reports(self):
        return [allocate_load_only(p["load"], scope="project:{0}".format(name), total_cost=p["cost"])
                for name, p in FIXTURES["projects"].items()]

    def test_summed_projects(self):
        comparison = compare_scopes(self.project_reports(), allocate_load_only(FIXTURES["portfolio"]["load"]))
        self.assertAlmostEqual(comparison.project_cost, 561.41, places=6)
        ratios = {row["participant"]: row["summed_ratio"] for row in comparison.rows}
        for bus, expected in (("b1", 40.54), ("b2", 13.57), ("b4", 5.11), ("b6", 0.09), ("b3", 0.0), ("b7", 0.0)):
            self.assertAlmostEqual(ratios[bus], expected, delta=0.01)
        self.assertAlmostEqual(sum(ratios.values()), 100.0, places=6)

    def test_portfolio_loser_charged_by_projects(self):
        comparison = compare_scopes(self.project_reports(), allocate_load_only(FIXTURES["portfolio"]["load"]))
        self.assertIn("b4", comparison.flagged)
        self.assertNotIn("b3", comparison.flagged)
        frame = comparison.as_frame()
        self.assertEqual(frame.index.name, "participant")
        self.assertTrue(frame.loc["b4", "flagged"])

    def test_compare_needs_costs(self):
        reports = [allocate_load_only(FIXTURES["projects"]["l2"]["load"])]
        with self.assertRaises(PTAInvalidArgument):
            compare_scopes(reports, allocate_load_only(FIXTURES["portfolio"]["load"]))
        with self.assertRaises(PTAInvalidArgument):
            compare_scopes([], allocate_load_only(FIXTURES["portfolio"]["load"]))

    def test_compensation(self):
        report = allocate_load_only({"b1": 30.0, "b2": 10.0, "b3": -5.0}, total_cost=20.0, compensate=True)
        self.assertEqual(report.allocated["b3"], -5.0)
        self.assertAlmostEqual(report.allocated["b1"], 0.75 * 25.0)
        self.assertAlmostEqual(report.allocated["b2"], 0.25 * 25.0)
        self.assertAlmostEqual(sum(report.allocated.values()), 20.0)
        self.assertEqual(report.compensation, {"b3": 5.0})

    def test_compensation_needs_cost(self):
        with self.assertRaises(PTAInvalidArgument):
            compensate_losers(allocate_load_only({"b1": 1.0}))

    def test_benefit_cost_ratios(self):
        deltas = {"b1": 30.0, "b2": 10.0, "b3": -5.0}
        report = allocate_load_only(deltas)
        ratios = benefit_cost_ratios(deltas, report, 20.0)
        self.assertAlmostEqual(ratios["b1"], 2.0)
        self.assertAlmostEqual(ratios["b2"], 2.0)
        self.assertIsNone(ratios["b3"])
        with self.assertRaises(PTAInvalidArgument):
            benefit_cost_ratios(deltas, report, 0.0)
        with self.assertRaises(PTAInvalidArgument):
            report.with_cost(-1.0)

    def test_participant_label(self):
        self.assertEqual(participant_label(("b1", "coal")), "b1/coal")
        self.assertEqual(participant_label("b1"), "b1")
        self.assertEqual(split_key("b1/coal"), ("b1", "coal"))
        self.assertEqual(split_key("b1"), "b1")


def test():
    print("=" * len(__TITLE__))
    print(__TITLE__)
    print("=" * len(__TITLE__))
    suite = unittest.TestSuite()
    for case in (TestPTALoadOnly, TestPTALoadAndGeneration, TestPTACostAndScopes):
        suite.addTests(unittest.TestLoader().loadTestsFromTestCase(case))
    unittest.TextTestRunner(verbosity=2).run(suite)
