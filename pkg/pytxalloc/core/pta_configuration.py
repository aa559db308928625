"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .conf import CONF_PATH
from .errors import PTAInvalidType, PTAInvalidArgument, PTACaseNotFound, PTAMissingArgument
from .pta_allocation import POLICIES
from .pta_version import PYTXALLOC_LOGO
from argparse import Namespace
import json
import sys
import os

COMMANDS = ("validate", "cluster", "plan", "prices", "counterfactual", "benefits", "allocate", "sweep",
            "fixtures", "report")

NEEDS_CASE = ("validate", "cluster", "plan", "prices", "counterfactual", "benefits", "sweep")
NEEDS_TREE = ("plan", "prices", "counterfactual", "benefits")


def load_defaults(path=CONF_PATH):
    """
    config.json sections flattened into one mapping
    """
    with open(path, "r") as handle:
        raw = json.load(handle)
    out = {}
    for section in raw.values():
        out.update(section)
    return out


class PTAConfiguration(Namespace):
    """
    Run configuration: parsed command line arguments completed with the packaged defaults
    """

    def __init__(self, arguments):
        super(PTAConfiguration, self).__init__(**arguments.__dict__)
        for key, value in load_defaults().items():
            if self.__dict__.get(key) is None:
                setattr(self, key, value)
        if self.out is False or self.out is None:
            self.out = "."
        if not self.nologo:
            sys.stderr.write("{0}\n".format(PYTXALLOC_LOGO))
        self.check()

    def check(self):
        for name, kind in (("gap", float), ("discount_rate", float), ("built_tol", float), ("binary_tol", float)):
            value = self.__dict__.get(name)
            if isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
                setattr(self, name, value)
            if not isinstance(value, kind):
                raise PTAInvalidType(value, kind)
        for name in ("days", "seed", "period_years", "option", "workers", "histogram_bins"):
            if not isinstance(self.__dict__.get(name), int):
                raise PTAInvalidType(self.__dict__.get(name), int)
        if not 0.0 < self.gap < 1.0:
            raise PTAInvalidArgument("gap must lie in (0, 1), got {0}".format(self.gap))
        if self.days < 1:
            raise PTAInvalidArgument("days must be >= 1, got {0}".format(self.days))
        if self.option not in (1, 2, 3):
            raise PTAInvalidArgument("option must be one of 1, 2, 3, got {0}".format(self.option))
        if self.policy not in POLICIES:
            raise PTAInvalidArgument("policy must be one of {0}, got {1}".format(", ".join(POLICIES), self.policy))
        if self.workers < 1 or self.histogram_bins < 1:
            raise PTAInvalidArgument("workers and histogram bins must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise PTAInvalidArgument("time limit must be positive, got {0}".format(self.time_limit))
        if self.command in NEEDS_CASE or (self.command == "allocate" and not self.benefits):
            if not self.case:
                raise PTAMissingArgument("--case is required for {0}".format(self.command))
            if not os.path.isfile(self.case):
                raise PTACaseNotFound(self.case)
        if self.command in NEEDS_TREE or (self.command == "allocate" and not self.benefits):
            if not self.scenarios:
                raise PTAMissingArgument("--scenarios is required for {0}".format(self.command))
        for name in ("scenarios", "plan", "counter_plan", "benefits", "ex_ante"):
            path = self.__dict__.get(name)
            if path and not os.path.isfile(path):
                raise PTACaseNotFound(path)

    def __contains__(self, items):
        if type(items) != list:
            raise PTAInvalidType(type(items), list)
        for element in items:
            if element not in self.__dict__:
                return False
        return True

    def __getattr__(self, item):
        """
        Get a parameter from configuration, return False if parameter was not found
        """
        if item in self.__dict__:
            return self.__dict__[item]
        return False

    def start(self):
        """
        Run the selected subcommand, returns its summary
        """
        from .pta_worker import PTAWorker
        if self.command not in COMMANDS:
            raise PTAInvalidArgument("unknown command {0}".format(self.command))
        return getattr(PTAWorker(self), "cmd_{0}".format(self.command))()

    @staticmethod
    def valid_expansion(value):
        """
        line:increment
        """
        import argparse
        line, sep, q = value.partition(":")
        if not sep or not line or not q:
            raise argparse.ArgumentTypeError("expected line:increment, got {0}".format(value))
        return line, q
