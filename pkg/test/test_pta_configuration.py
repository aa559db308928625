"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from pytxalloc.core.pta_configuration import PTAConfiguration, load_defaults
from pytxalloc.core.errors import PTAInvalidArgument, PTAMissingArgument, PTACaseNotFound, PTAInvalidType
from pytxalloc.core.cases import DESK_CASE, DESK_SCENARIOS
from pytxalloc.pytxalloc import build_parser
import argparse
import unittest

__TITLE__ = "Testing PTAConfiguration object"


def configuration(*argv):
    return PTAConfiguration(build_parser().parse_args(list(argv) + ["--no-logo"]))


class TestPTAConfiguration(unittest.TestCase):

    def test_parsed_arguments_are_kept(self):
        parsed = build_parser().parse_args(["plan", "--case", DESK_CASE, "--scenarios", DESK_SCENARIOS, "--no-logo"])
        args = PTAConfiguration(parsed)
        for arg in parsed.__dict__:
            self.assertTrue(arg in args.__dict__)

    def test_defaults_fill_missing_values(self):
        config = configuration("plan", "--case", DESK_CASE, "--scenarios", DESK_SCENARIOS, "--gap", "0.01")
        defaults = load_defaults()
        self.assertEqual(config.gap, 0.01)
        self.assertEqual(config.days, defaults["days"])
        self.assertEqual(config.option, 2)
        self.assertEqual(config.policy, "load-only")
        self.assertEqual(config.scope, "portfolio")

    def test_contains_and_missing_attributes(self):
        config = configuration("fixtures")
        self.assertTrue(["gap", "days"] in config)
        self.assertFalse(["gap", "nothing"] in config)
        self.assertFalse(config.nothing)
        with self.assertRaises(PTAInvalidType):
            "gap" in config

    def test_gap_range(self):
        with self.assertRaises(PTAInvalidArgument):
            configuration("plan", "--case", DESK_CASE, "--scenarios", DESK_SCENARIOS, "--gap", "1.5")
        with self.assertRaises(PTAInvalidArgument):
            configuration("plan", "--case", DESK_CASE, "--scenarios", DESK_SCENARIOS, "--gap", "0")

    def test_option_and_policy(self):
        with self.assertRaises(PTAInvalidArgument):
            configuration("counterfactual", "--case", DESK_CASE, "--scenarios", DESK_SCENARIOS, "--option", "4")
        with self.assertRaises(PTAInvalidArgument):
            configuration("allocate", "--benefits", DESK_CASE, "--policy", "everyone")

    def test_case_required(self):
        with self.assertRaises(PTAMissingArgument):
            configuration("plan", "--scenarios", DESK_SCENARIOS)
        with self.assertRaises(PTAMissingArgument):
            configuration("plan", "--case", DESK_CASE)
        with self.assertRaises(PTACaseNotFound):
            configuration("validate", "--case", DESK_CASE + ".missing")

    def test_allocation_from_file_needs_no_case(self):
        config = configuration("allocate", "--benefits", DESK_CASE)
        self.assertFalse(config.case)

    def test_expansion_argument(self):
        self.assertEqual(PTAConfiguration.valid_expansion("l2:q7"), ("l2", "q7"))
        with self.assertRaises(argparse.ArgumentTypeError):
            PTAConfiguration.valid_expansion("l2")


def test():
    print("=" * len(__TITLE__))
    print(__TITLE__)
    print("=" * len(__TITLE__))
    suite = unittest.TestLoader().loadTestsFromTestCase(TestPTAConfiguration)
    unittest.TextTestRunner(verbosity=2).run(suite)
