"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from pytxalloc.core.pta_scenario import (PTANodeData, PTAScenarioNode, PTAScenarioTree, PTAGridDimension,
                                         PTAUncertaintyGrid, validate_tree, path_to_root, discount_factor,
                                         enumerate_grid)
from pytxalloc.core.pta_system import PTATechnology
from pytxalloc.core.errors import PTAInvalidArgument, PTAValidationError
from test.toy_cases import fan_tree, seven_scenario_tree, chain_tree
import unittest

__TITLE__ = "Testing scenario trees and the uncertainty grid"


class TestPTAScenarioTree(unittest.TestCase):

    def test_seven_scenario_tree_is_valid(self):
        tree = seven_scenario_tree()
        report = validate_tree(tree)
        self.assertTrue(report.ok, report.violations)
        self.assertEqual(len(tree), 8)
        self.assertEqual(tree.horizon, 2)
        self.assertEqual(tree.stage_boundary, 2)

    def test_path_to_root(self):
        tree = fan_tree(depth=4)
        self.assertEqual(path_to_root(tree, "s2_y4"), ["n0", "s2_y2", "s2_y3", "s2_y4"])
        self.assertEqual(tree.path_to_root("n0"), ["n0"])

    def test_descendants_include_node(self):
        tree = fan_tree(depth=3)
        self.assertEqual(sorted(tree.descendants("s1_y2")), ["s1_y2", "s1_y3"])
        self.assertEqual(len(tree.descendants("n0")), len(tree))

    def test_unknown_node(self):
        with self.assertRaises(PTAInvalidArgument):
            path_to_root(fan_tree(), "missing")

    def test_probability_sum_violation(self):
        nodes = [PTAScenarioNode("n0", None, 1, 1.0), PTAScenarioNode("a", "n0", 2, 0.5),
                 PTAScenarioNode("b", "n0", 2, 0.4)]
        report = validate_tree(PTAScenarioTree(nodes))
        self.assertFalse(report.ok)
        self.assertTrue(any("probability sum" in v for v in report.violations))
        with self.assertRaises(PTAValidationError):
            report.raise_if_invalid()

    def test_zero_probability_rejected(self):
        nodes = [PTAScenarioNode("n0", None, 1, 1.0), PTAScenarioNode("a", "n0", 2, 1.0),
                 PTAScenarioNode("b", "n0", 2, 0.0)]
        report = validate_tree(PTAScenarioTree(nodes))
        self.assertTrue(any("zero probability" in v for v in report.violations))

    def test_root_depth_and_dangling_parent(self):
        nodes = [PTAScenarioNode("n0", None, 2, 1.0), PTAScenarioNode("a", "nx", 3, 1.0)]
        violations = validate_tree(PTAScenarioTree(nodes)).violations
        self.assertTrue(any("expected 1" in v for v in violations))
        self.assertTrue(any("dangling parent" in v for v in violations))

    def test_late_branching_needs_multistage(self):
        nodes = [PTAScenarioNode("n0", None, 1, 1.0), PTAScenarioNode("a", "n0", 2, 1.0),
                 PTAScenarioNode("b", "a", 3, 0.5), PTAScenarioNode("c", "a", 3, 0.5)]
        self.assertFalse(validate_tree(PTAScenarioTree(nodes)).ok)
        report = validate_tree(PTAScenarioTree(nodes, allow_multistage=True), allow_multistage=True)
        self.assertTrue(report.ok)
        self.assertEqual(len(report.warnings), 1)

    def test_node_rps_out_of_range(self):
        nodes = [PTAScenarioNode("n0", None, 1, 1.0, PTANodeData(rps=1.5))]
        self.assertFalse(validate_tree(PTAScenarioTree(nodes)).ok)

    def test_empty_tree(self):
        with self.assertRaises(PTAValidationError):
            PTAScenarioTree([])


class TestPTADiscounting(unittest.TestCase):

    def test_undiscounted_stage_counts_years(self):
        self.assertAlmostEqual(discount_factor(1, 0.0, 5), 5.0)
        self.assertAlmostEqual(discount_factor(3, 0.0, 5), 5.0)

    def test_later_stage_is_discounted(self):
        rate = 0.0778
        annuity = sum(1.0778 ** -k for k in range(5))
        self.assertAlmostEqual(discount_factor(1, rate, 5), annuity)
        self.assertAlmostEqual(discount_factor(2, rate, 5), annuity * 1.0778 ** -5)
        self.assertAlmostEqual(discount_factor(2, 0.1, 1), 1.0 / 1.1)

    def test_node_weight(self):
        tree = chain_tree(depth=2)
        self.assertAlmostEqual(tree.weight("n1", 0.1, 1), 1.0 / 1.1)
        self.assertAlmostEqual(fan_tree().weight("s1_y2", 0.0, 2), 2.0 / 3.0)

    def test_invalid_arguments(self):
        for args in ((0, 0.05, 5), (1, -1.0, 5), (1, 0.05, 0), (1.5, 0.05, 5)):
            with self.assertRaises(PTAInvalidArgument):
                discount_factor(*args)


class TestPTAUncertaintyGrid(unittest.TestCase):

    def grid(self):
        return PTAUncertaintyGrid([PTAGridDimension("growth", "demand", (0.9, 1.0, 1.1)),
                                   PTAGridDimension("gas", "fuel_cost", (0.5, 1.0, 2.0), ("gas",)),
                                   PTAGridDimension("rps", "rps", (0.1, 0.2, 0.3))])

    def test_full_product_in_lexicographic_order(self):
        combos = enumerate_grid(self.grid())
        self.assertEqual(len(combos), 27)
        self.assertEqual(combos[0].levels, ("low", "low", "low"))
        self.assertEqual(combos[1].levels, ("low", "low", "medium"))
        self.assertEqual(combos[3].levels, ("low", "medium", "low"))
        self.assertEqual(combos[-1].levels, ("high", "high", "high"))
        self.assertEqual([c.index for c in combos], list(range(27)))

    def test_five_dimensions_give_243_points(self):
        dims = [PTAGridDimension("d{0}".format(i), "demand", (1.0, 1.0, 1.0)) for i in range(5)]
        self.assertEqual(len(enumerate_grid(PTAUncertaintyGrid(dims))), 243)

    def test_node_data_applies_multipliers(self):
        techs = [PTATechnology("gas", fuel_cost=30.0), PTATechnology("coal", fuel_cost=10.0)]
        combo = enumerate_grid(self.grid())[26]
        data = self.grid().node_data(combo, techs)
        self.assertAlmostEqual(data.demand_growth, 1.1)
        self.assertAlmostEqual(data.fuel_cost["gas"], 60.0)
        self.assertAlmostEqual(data.fuel_cost["coal"], 10.0)
        self.assertAlmostEqual(data.rps, 0.3)

    def test_subset_and_bad_dimension(self):
        self.assertEqual(len(self.grid().subset(["growth"])), 3)
        with self.assertRaises(PTAInvalidArgument):
            self.grid().subset(["wind"])
        with self.assertRaises(PTAValidationError):
            PTAUncertaintyGrid([PTAGridDimension("x", "weather", (1, 2, 3))])
        with self.assertRaises(PTAValidationError):
            enumerate_grid(PTAUncertaintyGrid([PTAGridDimension("x", "demand", (1, 2))]))


def test():
    print("=" * len(__TITLE__))
    print(__TITLE__)
    print("=" * len(__TITLE__))
    suite = unittest.TestSuite()
    for case in (TestPTAScenarioTree, TestPTADiscounting, TestPTAUncertaintyGrid):
        suite.addTests(unittest.TestLoader().loadTestsFromTestCase(case))
    unittest.TextTestRunner(verbosity=2).run(suite)
