"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import PTACaseNotFound, PTAValidationError
import json
import os

BUSES = ("b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8")

# published load benefit deltas, $M, buses b1..b8
PORTFOLIO_LOAD = (6215.0, 2281.0, -1379.0, -453.0, -120.0, 15.0, -3250.0, 2360.0)

PROJECTS = {
    "l2": {"cost": 154.96, "load": (4904.0, -1488.0, -1509.0, -171.0, -831.0, -15.0, -2015.0, 411.0)},
    "l3": {"cost": 78.34, "load": (3668.0, -2279.0, -61.0, -625.0, -2233.0, -104.0, -908.0, -2170.0)},
    "l6": {"cost": 72.64, "load": (-67.0, 2600.0, -2.0, 1.0, 53.0, -9.0, -1887.0, 132.0)},
    "l7": {"cost": 98.79, "load": (-456.0, -1714.0, -912.0, 304.0, 85.0, -159.0, -1525.0, 795.0)},
    "l10": {"cost": 78.34, "load": (181.0, -2333.0, -10.0, -149.0, -1439.0, -146.0, -910.0, 2288.0)},
    "l12": {"cost": 78.34, "load": (12.0, 196.0, -5.0, 77.0, 1195.0, 12.0, -1848.0, 336.0)},
}

# generator benefits already weighted by existing capacity, one pooled participant per bus
GENERATION = (-3000.0, 4.78, 22239.62, 5358.94, 14.35, 33.49, 8277.65, 1047.86)
GENERATION_TECH = "fleet"

EXPECTED = {
    "portfolio": (57.17, 20.98, 0.0, 0.0, 0.0, 0.14, 0.0, 21.71),
    "l2": (92.27, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 7.73),
    "load_share": 22.72,
    "gen_share": 77.28,
}


def by_bus(values):
    return dict(zip(BUSES, values))


def fixture_sets():
    """
    Benefit vectors ready to feed the allocation commands
    """
    return {
        "buses": list(BUSES),
        "portfolio": {"load": by_bus(PORTFOLIO_LOAD), "cost": round(sum(p["cost"] for p in PROJECTS.values()), 2)},
        "projects": {name: {"load": by_bus(p["load"]), "cost": p["cost"]} for name, p in PROJECTS.items()},
        "generation": {"gen": {"{0}/{1}".format(b, GENERATION_TECH): v for b, v in by_bus(GENERATION).items()},
                       "existing": {"{0}/{1}".format(b, GENERATION_TECH): 1.0 for b in BUSES}},
        "no_beneficiaries": {"load": by_bus((-1.0,) * len(BUSES)), "cost": 1.0},
    }


def read_benefits(path):
    """
    Read a benefit vector file written by the fixtures command or the benefits command
    """
    if not os.path.isfile(path):
        raise PTACaseNotFound(path)
    with open(path, "r") as handle:
        try:
            raw = json.load(handle)
        except ValueError as e:
            raise PTAValidationError("malformed benefit file {0}: {1}".format(path, e))
    if "portfolio" not in raw and "load" not in raw:
        raise PTAValidationError("benefit file {0} has neither a portfolio nor a load vector".format(path))
    return raw


def split_key(key):
    bus, _, tech = key.partition("/")
    return (bus, tech) if tech else bus
