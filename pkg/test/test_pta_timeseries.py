"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from pytxalloc.core.pta_timeseries import full_year_blocks, net_load, cluster_days, HOURS_PER_DAY
from pytxalloc.core.errors import PTAInvalidArgument, PTAValidationError
import numpy as np
import unittest

__TITLE__ = "Testing representative day selection"


def synthetic_days(days=14, seed=3):
    rng = np.random.default_rng(seed)
    shape = 100.0 + 30.0 * np.sin(np.linspace(0.0, 2.0 * np.pi, HOURS_PER_DAY))
    scale = np.where(np.arange(days) % 7 >= 5, 0.7, 1.0)
    return (scale[:, None] * shape[None, :] + rng.normal(0.0, 2.0, (days, HOURS_PER_DAY))).ravel()


class TestPTATimeBlocks(unittest.TestCase):

    def test_full_year_blocks(self):
        blocks = full_year_blocks(48)
        self.assertEqual(len(blocks), 48)
        self.assertEqual(blocks.total_weight, 48.0)
        self.assertEqual(list(blocks.as_frame().columns), ["block", "day", "source_hour", "weight"])

    def test_net_load(self):
        demand = np.array([100.0, 120.0])
        out = net_load(demand, {("b1", "solar"): [0.0, 0.5]}, {("b1", "solar"): 40.0})
        np.testing.assert_allclose(out, [100.0, 100.0])
        with self.assertRaises(PTAValidationError):
            net_load(demand, {("b1", "solar"): [0.0, 0.5, 1.0]}, {("b1", "solar"): 40.0})


class TestPTAClustering(unittest.TestCase):

    def test_weights_cover_source_hours(self):
        series = synthetic_days()
        blocks = cluster_days(series, 3, seed=11)
        self.assertEqual(len(blocks.days), 3)
        self.assertEqual(len(blocks), 3 * HOURS_PER_DAY)
        self.assertAlmostEqual(blocks.total_weight, len(series))
        self.assertEqual(list(blocks.days), sorted(blocks.days))
        sizes = np.bincount(blocks.labels)
        for i, day in enumerate(blocks.days):
            hourly = blocks.weights[i * HOURS_PER_DAY:(i + 1) * HOURS_PER_DAY]
            np.testing.assert_allclose(hourly, sizes[blocks.labels[day]])
            self.assertAlmostEqual(hourly.sum(), HOURS_PER_DAY * sizes[blocks.labels[day]])

    def test_wcss_never_increases(self):
        history = cluster_days(synthetic_days(), 4, seed=1).wcss
        for before, after in zip(history, history[1:]):
            self.assertLessEqual(after, before * (1 + 1e-12) + 1e-12)

    def test_same_seed_same_days(self):
        series = synthetic_days()
        self.assertEqual(cluster_days(series, 3, seed=5).days, cluster_days(series, 3, seed=5).days)

    def test_k_equal_days_is_identity(self):
        series = synthetic_days(days=5)
        blocks = cluster_days(series, 5, seed=0)
        np.testing.assert_array_equal(blocks.hours, np.arange(len(series)))
        np.testing.assert_allclose(blocks.weights, 1.0)

    def test_weekend_days_cluster_together(self):
        blocks = cluster_days(synthetic_days(), 2, seed=2)
        labels = blocks.labels
        weekend = [d for d in range(14) if d % 7 >= 5]
        self.assertEqual(len({labels[d] for d in weekend}), 1)
        self.assertNotEqual(labels[weekend[0]], labels[0])

    def test_invalid_inputs(self):
        with self.assertRaises(PTAInvalidArgument):
            cluster_days(synthetic_days(days=3), 4, seed=0)
        with self.assertRaises(PTAInvalidArgument):
            cluster_days(synthetic_days(days=3), 0, seed=0)
        with self.assertRaises(PTAValidationError):
            cluster_days(np.ones(30), 1, seed=0)


def test():
    print("=" * len(__TITLE__))
    print(__TITLE__)
    print("=" * len(__TITLE__))
    suite = unittest.TestSuite()
    for case in (TestPTATimeBlocks, TestPTAClustering):
        suite.addTests(unittest.TestLoader().loadTestsFromTestCase(case))
    unittest.TextTestRunner(verbosity=2).run(suite)
