"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import PTACaseNotFound, PTAValidationError, PTAInvalidType
from .pta_logger import PTALogger
from .pta_scenario import (PTAScenarioNode, PTAScenarioTree, PTANodeData, PTAGridDimension,
                           PTAUncertaintyGrid)
from .pta_system import (PTABus, PTALine, PTAShiftFactorMatrix, PTAIncrementCatalog, PTAPenaltyCurve,
                         PTATechnology, PTAFleetState, PTASettings, PTASystemCase, compute_shift_factors)
import pandas as pd
import numpy as np
import json
import os

SF_CONSISTENCY_TOL = 1e-6


class PTACaseLoader(object):
    """
    Reads a JSON case file (plus the hourly CSV it points to) into a PTASystemCase
    """

    def __init__(self, path):
        if not os.path.isfile(path):
            raise PTACaseNotFound(path)
        self.path = path
        self.base_dir = os.path.dirname(os.path.abspath(path))
        self.logger = self.init_logger()
        self.logger.debug("{0} - PTACaseLoader successfully initialized".format(PTALogger.stamp()))

    def init_logger(self):
        return PTALogger.init_logger(__name__)

    def read(self):
        with open(self.path, "r") as handle:
            try:
                raw = json.load(handle)
            except ValueError as e:
                raise PTAValidationError("malformed case file {0}: {1}".format(self.path, e))
        if not isinstance(raw, dict):
            raise PTAInvalidType(raw, dict)
        missing = [k for k in ("buses", "lines", "increments", "penalty_curve", "technologies",
                               "existing_capacity") if k not in raw]
        if missing:
            raise PTAValidationError(["case file misses section {0}".format(k) for k in missing])
        return raw

    def load(self):
        raw = self.read()
        buses = [PTABus(str(b["id"]), bool(b.get("reference", False))) for b in raw["buses"]]
        lines = [PTALine(str(l["id"]), str(l["from"]), str(l["to"]), float(l["capacity"]),
                         None if l.get("reactance") is None else float(l["reactance"])) for l in raw["lines"]]
        technologies = [PTATechnology(str(t["id"]), bool(t.get("renewable", False)),
                                      float(t.get("fixed_cost", 0.0)), float(t.get("vom_cost", 0.0)),
                                      float(t.get("fuel_cost", 0.0)), float(t.get("investment_cost", 0.0)),
                                      bool(t.get("buildable", True)))
                        for t in raw["technologies"]]
        increments = self.load_increments(raw["increments"], [l.id for l in lines])
        penalty = self.load_penalty(raw["penalty_curve"])
        existing = {}
        for tech, row in raw["existing_capacity"].items():
            for bus, mw in row.items():
                if float(mw) != 0.0:
                    existing[(str(bus), str(tech))] = float(mw)
        demand, availability = self.load_profiles(raw.get("profiles"), [b.id for b in buses],
                                                  [t.id for t in technologies])
        shift_factors = self.load_shift_factors(raw.get("shift_factors"), buses, lines)
        settings = raw.get("settings", {})
        case = PTASystemCase(
            name=raw.get("name", os.path.splitext(os.path.basename(self.path))[0]),
            buses=buses, lines=lines, shift_factors=shift_factors, increments=increments,
            penalty=penalty, technologies=technologies,
            fleet=PTAFleetState(existing=existing, availability=availability),
            demand=demand,
            settings=PTASettings(rps_soft_price=settings.get("rps_soft_price"),
                                 at_most_one_increment=bool(settings.get("at_most_one_increment", False)),
                                 allow_retirement=bool(settings.get("allow_retirement", True)),
                                 hours_per_year=None if settings.get("hours_per_year") is None
                                 else float(settings["hours_per_year"])),
            grid=self.load_grid(raw.get("grid", [])),
            evaluation=self.load_node_data(settings.get("evaluation", {}), technologies))
        problems = case.validate()
        if problems:
            raise PTAValidationError(problems)
        self.logger.info("{0} - case {1}: {2} buses, {3} lines, {4} technologies, {5} hours".format(
            PTALogger.stamp(), case.name, len(buses), len(lines), len(technologies), case.hours))
        return case

    @staticmethod
    def load_increments(raw, line_ids):
        sizes = {str(q): float(v) for q, v in raw["sizes"].items()}
        default = raw.get("costs", {}).get("default", {})
        costs = {}
        for line in line_ids:
            row = dict(default)
            row.update(raw.get("costs", {}).get(line, {}))
            for q, value in row.items():
                costs[(line, str(q))] = float(value)
        return PTAIncrementCatalog(sizes=sizes, costs=costs)

    @staticmethod
    def load_penalty(raw):
        if raw.get("load_value") is None:
            raise PTAValidationError("penalty_curve.load_value (served-load value) is required")
        caps, prices = [], []
        for cap, price in raw["segments"]:
            caps.append(None if cap is None else float(cap))
            prices.append(float(price))
        return PTAPenaltyCurve(caps=tuple(caps), prices=tuple(prices),
                               line_price=float(raw.get("line_price", 0.0)),
                               load_value=float(raw["load_value"]))

    def load_profiles(self, raw, bus_ids, tech_ids):
        if not raw:
            raise PTAValidationError("case file misses section profiles")
        frame = read_hourly(os.path.join(self.base_dir, raw["path"]))
        demand = {}
        for bus, column in raw.get("demand", {}).items():
            demand[str(bus)] = self.column(frame, column)
        for bus in bus_ids:
            demand.setdefault(bus, np.zeros(len(frame)))
        availability = {}
        for key, column in raw.get("availability", {}).items():
            series = self.column(frame, column)
            if "/" in key:
                bus, tech = key.split("/", 1)
                availability[(bus, tech)] = series
            else:
                for bus in bus_ids:
                    availability.setdefault((bus, key), series)
        return demand, availability

    @staticmethod
    def column(frame, name):
        if name not in frame.columns:
            raise PTAValidationError("hourly file has no column {0}".format(name))
        return frame[name].to_numpy(dtype=float)

    def load_shift_factors(self, raw, buses, lines):
        reference = [b.id for b in buses if b.is_reference]
        if len(reference) != 1:
            raise PTAValidationError("expected exactly one reference bus, found {0}".format(len(reference)))
        reference = reference[0]
        computed = None
        if all(l.reactance is not None for l in lines):
            computed = compute_shift_factors(buses, lines, reference)
        if not raw:
            if computed is None:
                raise PTAValidationError("lines need reactances when no shift factors are supplied")
            return computed
        others = [b.id for b in buses if b.id != reference]
        values = [[float(raw[l.id].get(b, 0.0)) for b in others] for l in lines]
        ingested = PTAShiftFactorMatrix([l.id for l in lines], others, values, reference)
        if computed is not None:
            drift = np.max(np.abs(ingested.values - computed.values)) if len(lines) else 0.0
            if drift > SF_CONSISTENCY_TOL:
                self.logger.warning("{0} - supplied shift factors differ from reactance-based ones by {1:.3g}".format(
                    PTALogger.stamp(), drift))
        return ingested

    @staticmethod
    def load_grid(raw):
        return PTAUncertaintyGrid([PTAGridDimension(str(d["name"]), str(d["target"]),
                                                    tuple(float(v) for v in d["levels"]),
                                                    tuple(d.get("techs", ())))
                                   for d in raw])

    @staticmethod
    def load_node_data(raw, technologies):
        fuel = {t.id: t.fuel_cost for t in technologies}
        fuel.update({k: float(v) for k, v in raw.get("fuel_cost", {}).items()})
        invest = {t.id: t.investment_cost for t in technologies}
        invest.update({k: float(v) for k, v in raw.get("investment_cost", {}).items()})
        return PTANodeData(demand_growth=float(raw.get("demand_growth", 1.0)), fuel_cost=fuel,
                           investment_cost=invest, rps=float(raw.get("rps", 0.0)))


def read_hourly(path):
    """
    Delimited text, one row per hour; the delimiter is sniffed
    """
    if not os.path.isfile(path):
        raise PTACaseNotFound(path)
    frame = pd.read_csv(path, sep=None, engine="python")
    if frame.empty:
        raise PTAValidationError("hourly file {0} is empty".format(path))
    if frame.isnull().values.any():
        raise PTAValidationError("hourly file {0} has missing values".format(path))
    return frame


def load_case(path):
    return PTACaseLoader(path).load()


def load_scenarios(path, case, allow_multistage=False):
    """
    Scenario file: {"nodes": [{id, parent, depth, probability, demand_growth, fuel_cost, investment_cost, rps}]}
    """
    if not os.path.isfile(path):
        raise PTACaseNotFound(path)
    with open(path, "r") as handle:
        try:
            raw = json.load(handle)
        except ValueError as e:
            raise PTAValidationError("malformed scenario file {0}: {1}".format(path, e))
    entries = raw["nodes"] if isinstance(raw, dict) else raw
    if not entries:
        raise PTAValidationError("scenario tree is empty")
    nodes = []
    for entry in entries:
        nodes.append(PTAScenarioNode(
            id=str(entry["id"]),
            parent=None if entry.get("parent") is None else str(entry["parent"]),
            depth=int(entry["depth"]),
            probability=float(entry["probability"]),
            data=PTACaseLoader.load_node_data(entry, case.technologies)))
    tree = PTAScenarioTree(nodes, allow_multistage=allow_multistage)
    report = tree.validate()
    for warning in report.warnings:
        PTALogger.init_logger(__name__).warning("{0} - {1}".format(PTALogger.stamp(), warning))
    report.raise_if_invalid()
    return tree
