"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from pytxalloc.core.pta_system import (PTABus, PTALine, PTAIncrementCatalog, PTAPenaltyCurve, compute_shift_factors,
                                       line_flows, dc_flows, curtailment_cost)
from pytxalloc.core.errors import PTAValidationError, PTAInvalidArgument, PTADomainError
from test.toy_cases import two_bus_case, three_bus_case
import numpy as np
import unittest

__TITLE__ = "Testing the network model"


class TestPTAShiftFactors(unittest.TestCase):

    def triangle(self):
        buses = [PTABus("A", True), PTABus("B"), PTABus("C")]
        lines = [PTALine("AB", "A", "B", 80.0, 1.0), PTALine("BC", "B", "C", 80.0, 1.0),
                 PTALine("AC", "A", "C", 80.0, 1.0)]
        return buses, lines

    def test_two_bus(self):
        sf = two_bus_case().shift_factors
        self.assertAlmostEqual(sf["AB", "B"], -1.0)
        self.assertEqual(sf["AB", "A"], 0.0)

    def test_triangle_values(self):
        buses, lines = self.triangle()
        sf = compute_shift_factors(buses, lines, "A")
        self.assertAlmostEqual(sf["AB", "B"], -2.0 / 3.0)
        self.assertAlmostEqual(sf["BC", "B"], 1.0 / 3.0)
        self.assertAlmostEqual(sf["AC", "B"], -1.0 / 3.0)
        self.assertAlmostEqual(sf["AC", "C"], -2.0 / 3.0)

    def test_flows_match_direct_solve(self):
        buses, lines = [PTABus("A", True), PTABus("B"), PTABus("C"), PTABus("D")], [
            PTALine("AB", "A", "B", 1.0, 0.2), PTALine("BC", "B", "C", 1.0, 0.5), PTALine("CD", "C", "D", 1.0, 0.1),
            PTALine("AD", "A", "D", 1.0, 0.3), PTALine("BD", "B", "D", 1.0, 0.4)]
        sf = compute_shift_factors(buses, lines, "A")
        rng = np.random.default_rng(7)
        for _ in range(5):
            ni = rng.normal(size=4)
            ni[0] = -ni[1:].sum()
            injections = dict(zip("ABCD", ni))
            np.testing.assert_allclose(line_flows(sf, injections), dc_flows(buses, lines, "A", injections),
                                       atol=1e-9)

    def test_reference_column_absent(self):
        buses, lines = self.triangle()
        sf = compute_shift_factors(buses, lines, "A")
        self.assertEqual(sf.buses, ("B", "C"))
        np.testing.assert_allclose(sf.full(["A", "B", "C"])[:, 0], 0.0)

    def test_disconnected_network(self):
        buses = [PTABus("A", True), PTABus("B"), PTABus("C")]
        with self.assertRaises(PTAValidationError):
            compute_shift_factors(buses, [PTALine("AB", "A", "B", 1.0, 1.0)], "A")

    def test_missing_reactance(self):
        buses, lines = self.triangle()
        lines[1] = PTALine("BC", "B", "C", 80.0, None)
        with self.assertRaises(PTAValidationError):
            compute_shift_factors(buses, lines, "A")

    def test_imbalanced_injections(self):
        sf = two_bus_case().shift_factors
        with self.assertRaises(PTAInvalidArgument):
            line_flows(sf, {"A": 10.0, "B": -9.0})


class TestPTASystemCase(unittest.TestCase):

    def test_toy_cases_validate(self):
        self.assertEqual(two_bus_case().validate(), [])
        self.assertEqual(three_bus_case().validate(), [])

    def test_invalid_lines_and_references(self):
        case = two_bus_case()
        case.lines = [PTALine("AB", "A", "A", -1.0, 0.1)]
        case.buses = [PTABus("A", True), PTABus("B", True)]
        problems = case.validate()
        self.assertTrue(any("not distinct" in p for p in problems))
        self.assertTrue(any("negative initial capacity" in p for p in problems))
        self.assertTrue(any("reference bus" in p for p in problems))
        with self.assertRaises(PTAValidationError):
            case.reference

    def test_penalty_curve_checks(self):
        self.assertEqual(PTAPenaltyCurve((10.0, None), (1.0, 2.0), 5.0, 10.0).check(), [])
        self.assertEqual(len(PTAPenaltyCurve((None, 10.0), (2.0, 1.0), 5.0, 10.0).check()), 2)

    def test_increment_catalog(self):
        catalog = PTAIncrementCatalog({"q1": 100.0, "q2": 200.0}, {("l", "q1"): 10.0, ("l", "q2"): 16.0})
        self.assertTrue(catalog.is_economies_of_scale("l"))
        self.assertEqual(catalog.unit_costs("l"), [0.1, 0.08])
        with self.assertRaises(PTAValidationError):
            catalog.cost("m", "q1")


class TestPTACurtailment(unittest.TestCase):

    def test_greedy_fill(self):
        curve = PTAPenaltyCurve((50.0, None), (1000.0, 5000.0), 5000.0, 2000.0)
        cost, split = curtailment_cost(80.0, curve)
        self.assertEqual(split, [50.0, 30.0])
        self.assertAlmostEqual(cost, 50.0 * 1000.0 + 30.0 * 5000.0)
        self.assertEqual(curtailment_cost(0.0, curve)[0], 0.0)

    def test_bounded_curve_overflow(self):
        curve = PTAPenaltyCurve((50.0, 50.0), (1000.0, 5000.0), 5000.0, 2000.0)
        with self.assertRaises(PTADomainError):
            curtailment_cost(120.0, curve)
        with self.assertRaises(PTAInvalidArgument):
            curtailment_cost(-1.0, curve)


def test():
    print("=" * len(__TITLE__))
    print(__TITLE__)
    print("=" * len(__TITLE__))
    suite = unittest.TestSuite()
    for case in (TestPTAShiftFactors, TestPTASystemCase, TestPTACurtailment):
        suite.addTests(unittest.TestLoader().loadTestsFromTestCase(case))
    unittest.TextTestRunner(verbosity=2).run(suite)
