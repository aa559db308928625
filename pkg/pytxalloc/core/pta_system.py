"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import PTAValidationError, PTAInvalidArgument, PTADomainError
from .pta_logger import PTALogger
from dataclasses import dataclass, field
from scipy.sparse.linalg import splu
from typing import Dict, Optional
import scipy.sparse as sp
import networkx as nx
import numpy as np
import math

INJECTION_TOL = 1e-6


@dataclass(frozen=True)
class PTABus:
    id: str
    is_reference: bool = False


@dataclass(frozen=True)
class PTALine:
    id: str
    from_bus: str
    to_bus: str
    initial_capacity: float
    reactance: Optional[float] = None


class PTAShiftFactorMatrix(object):
    """
    SF[l, b] for every line and every non-reference bus
    """

    def __init__(self, lines, buses, values, reference):
        self.lines = tuple(lines)
        self.buses = tuple(buses)
        self.reference = reference
        self.values = np.asarray(values, dtype=float).reshape(len(self.lines), len(self.buses))
        if reference in self.buses:
            raise PTAValidationError("shift factor column present for reference bus {0}".format(reference))

    def __getitem__(self, key):
        line, bus = key
        if bus == self.reference:
            return 0.0
        return float(self.values[self.lines.index(line), self.buses.index(bus)])

    def full(self, bus_order):
        """
        Dense matrix over bus_order with a zero column at the reference bus
        """
        out = np.zeros((len(self.lines), len(bus_order)))
        for j, bus in enumerate(bus_order):
            if bus != self.reference:
                out[:, j] = self.values[:, self.buses.index(bus)]
        return out

    def as_dict(self):
        return {line: {bus: float(self.values[i, j]) for j, bus in enumerate(self.buses)}
                for i, line in enumerate(self.lines)}


@dataclass(frozen=True)
class PTAIncrementCatalog:
    """
    Line capacity increments q with annualized cost per (line, q)
    """
    sizes: Dict[str, float]
    costs: Dict[tuple, float]

    @property
    def increments(self):
        return list(self.sizes)

    def cost(self, line, q):
        try:
            return self.costs[(line, q)]
        except KeyError:
            raise PTAValidationError("no investment cost for line {0} increment {1}".format(line, q))

    def unit_costs(self, line):
        return [self.costs[(line, q)] / self.sizes[q] for q in self.increments if (line, q) in self.costs]

    def is_economies_of_scale(self, line):
        ordered = sorted((self.sizes[q], self.costs[(line, q)] / self.sizes[q])
                         for q in self.increments if (line, q) in self.costs)
        return all(b[1] <= a[1] + 1e-12 for a, b in zip(ordered, ordered[1:]))


@dataclass(frozen=True)
class PTAPenaltyCurve:
    """
    System-wide power balance violation segments plus line and load values

    A cap of None marks the last, unbounded segment.
    """
    caps: tuple
    prices: tuple
    line_price: float
    load_value: float

    @property
    def segments(self):
        return list(zip(self.caps, self.prices))

    def check(self):
        problems = []
        if len(self.caps) != len(self.prices) or not self.caps:
            problems.append("penalty curve needs matching caps and prices")
        for a, b in zip(self.prices, self.prices[1:]):
            if b < a:
                problems.append("penalty curve prices decrease ({0} after {1})".format(b, a))
        for i, cap in enumerate(self.caps):
            if cap is None:
                if i != len(self.caps) - 1:
                    problems.append("only the last penalty segment may be unbounded")
            elif cap <= 0:
                problems.append("penalty segment {0} has non-positive cap".format(i + 1))
        if self.line_price < 0:
            problems.append("negative line violation price")
        return problems


@dataclass(frozen=True)
class PTATechnology:
    id: str
    is_renewable: bool = False
    fixed_cost: float = 0.0
    vom_cost: float = 0.0
    fuel_cost: float = 0.0
    investment_cost: float = 0.0
    buildable: bool = True

    def check(self):
        return ["technology {0} has negative {1}".format(self.id, name)
                for name in ("fixed_cost", "vom_cost", "fuel_cost", "investment_cost")
                if getattr(self, name) < 0]


@dataclass
class PTAFleetState:
    """
    Existing capacity G0[b, g] and hourly availability CA[b, g] (1.0 when absent)
    """
    existing: Dict[tuple, float] = field(default_factory=dict)
    availability: Dict[tuple, np.ndarray] = field(default_factory=dict)

    def capacity(self, bus, tech):
        return self.existing.get((bus, tech), 0.0)

    def profile(self, bus, tech, hours):
        if (bus, tech) in self.availability:
            return self.availability[(bus, tech)]
        return np.ones(hours)

    def check(self):
        problems = ["negative existing capacity at {0}/{1}".format(b, g)
                    for (b, g), v in self.existing.items() if v < 0]
        for (b, g), series in self.availability.items():
            if np.any(series < -1e-12) or np.any(series > 1 + 1e-12):
                problems.append("availability of {0}/{1} outside [0,1]".format(b, g))
        return problems


@dataclass
class PTASettings:
    rps_soft_price: Optional[float] = None
    at_most_one_increment: bool = False
    allow_retirement: bool = True
    # hours of operation the series stands for; block durations are scaled up to it
    hours_per_year: Optional[float] = None


class PTASystemCase(object):
    """
    Static system description plus the hourly data the time blocks are cut from
    """

    def __init__(self, name, buses, lines, shift_factors, increments, penalty, technologies, fleet,
                 demand, settings=None, grid=None, evaluation=None):
        self.name = name
        self.grid = grid
        self.evaluation = evaluation
        self.buses = list(buses)
        self.lines = list(lines)
        self.shift_factors = shift_factors
        self.increments = increments
        self.penalty = penalty
        self.technologies = list(technologies)
        self.fleet = fleet
        self.demand = {b: np.asarray(v, dtype=float) for b, v in demand.items()}
        self.settings = settings or PTASettings()

    @property
    def bus_ids(self):
        return [b.id for b in self.buses]

    @property
    def line_ids(self):
        return [l.id for l in self.lines]

    @property
    def tech_ids(self):
        return [g.id for g in self.technologies]

    @property
    def reference(self):
        refs = [b.id for b in self.buses if b.is_reference]
        if len(refs) != 1:
            raise PTAValidationError("expected exactly one reference bus, found {0}".format(len(refs)))
        return refs[0]

    @property
    def renewable(self):
        return [g.id for g in self.technologies if g.is_renewable]

    @property
    def hours(self):
        lengths = {len(v) for v in self.demand.values()}
        return lengths.pop() if len(lengths) == 1 else 0

    @property
    def year_scale(self):
        """
        Factor on block durations so that the series counts as hours_per_year of operation
        """
        if self.settings.hours_per_year is None or not self.hours:
            return 1.0
        return float(self.settings.hours_per_year) / self.hours

    def technology(self, tech_id):
        for tech in self.technologies:
            if tech.id == tech_id:
                return tech
        raise PTAInvalidArgument("unknown technology {0}".format(tech_id))

    def line(self, line_id):
        for line in self.lines:
            if line.id == line_id:
                return line
        raise PTAInvalidArgument("unknown line {0}".format(line_id))

    def validate(self):
        problems = []
        refs = [b.id for b in self.buses if b.is_reference]
        if len(refs) != 1:
            problems.append("expected exactly one reference bus, found {0}".format(len(refs)))
        bus_ids = set(self.bus_ids)
        for line in self.lines:
            if line.from_bus == line.to_bus:
                problems.append("line {0} endpoints are not distinct".format(line.id))
            if line.from_bus not in bus_ids or line.to_bus not in bus_ids:
                problems.append("line {0} references an unknown bus".format(line.id))
            if line.initial_capacity < 0:
                problems.append("line {0} has negative initial capacity".format(line.id))
        for q, size in self.increments.sizes.items():
            if size <= 0:
                problems.append("increment {0} size must be positive".format(q))
        for (line, q), cost in self.increments.costs.items():
            if cost < 0:
                problems.append("negative investment cost for line {0} increment {1}".format(line, q))
        problems.extend(self.penalty.check())
        if self.penalty.load_value is None:
            problems.append("served-load value is required")
        for tech in self.technologies:
            problems.extend(tech.check())
        problems.extend(self.fleet.check())
        for (b, g) in self.fleet.existing:
            if b not in bus_ids or g not in self.tech_ids:
                problems.append("existing capacity names unknown bus/technology {0}/{1}".format(b, g))
        lengths = {len(v) for v in self.demand.values()}
        if len(lengths) > 1:
            problems.append("demand series have different lengths")
        if self.settings.hours_per_year is not None and self.settings.hours_per_year < self.hours:
            problems.append("hours_per_year {0:g} is shorter than the {1} hour series".format(
                self.settings.hours_per_year, self.hours))
        for b in self.demand:
            if b not in bus_ids:
                problems.append("demand for unknown bus {0}".format(b))
        if self.shift_factors is not None:
            if list(self.shift_factors.lines) != self.line_ids:
                problems.append("shift factor rows do not match the line list")
        return problems


def _network(buses, lines):
    graph = nx.MultiGraph()
    graph.add_nodes_from(b.id if isinstance(b, PTABus) else b for b in buses)
    graph.add_edges_from((l.from_bus, l.to_bus) for l in lines)
    return graph


def compute_shift_factors(buses, lines, reference):
    """
    DC power transfer distribution factors, withdrawal at the reference bus
    """
    logger = PTALogger.init_logger(__name__)
    bus_ids = [b.id if isinstance(b, PTABus) else b for b in buses]
    if reference not in bus_ids:
        raise PTAValidationError("reference bus {0} not in bus list".format(reference))
    for line in lines:
        if line.from_bus not in bus_ids or line.to_bus not in bus_ids:
            raise PTAValidationError("line {0} references an unknown bus".format(line.id))
    if not nx.is_connected(_network(bus_ids, lines)):
        raise PTAValidationError("disconnected network")
    for line in lines:
        if line.reactance is None or line.reactance <= 0:
            raise PTAValidationError("line {0} needs a positive reactance".format(line.id))
    position = {b: i for i, b in enumerate(bus_ids)}
    n_lines, n_buses = len(lines), len(bus_ids)
    rows = np.repeat(np.arange(n_lines), 2)
    cols = np.array([[position[l.from_bus], position[l.to_bus]] for l in lines]).ravel()
    signs = np.tile([1.0, -1.0], n_lines)
    incidence = sp.csr_matrix((signs, (rows, cols)), shape=(n_lines, n_buses))
    b_line = sp.diags([1.0 / l.reactance for l in lines])
    b_bus = (incidence.T @ b_line @ incidence).tocsc()
    keep = [i for i, b in enumerate(bus_ids) if b != reference]
    reduced = b_bus[keep, :][:, keep].tocsc()
    try:
        factor = splu(reduced)
    except RuntimeError as e:
        raise PTAValidationError("singular susceptance system: {0}".format(e))
    b_flow = (b_line @ incidence).tocsc()[:, keep].toarray()
    # SF = Bf_red * Bbus_red^-1, solved column by column through the transpose
    values = factor.solve(b_flow.T, trans="T").T
    if not np.all(np.isfinite(values)):
        raise PTAValidationError("singular susceptance system")
    logger.debug("{0} - shift factors computed for {1} lines x {2} buses".format(
        PTALogger.stamp(), n_lines, len(keep)))
    return PTAShiftFactorMatrix([l.id for l in lines], [bus_ids[i] for i in keep], values, reference)


def line_flows(sf, injections, bus_order=None, tol=INJECTION_TOL):
    """
    flow_l = sum_b SF[l, b] * NI_b; injections is a mapping bus -> MW or an array over bus_order
    """
    if isinstance(injections, dict):
        bus_order = list(injections)
        ni = np.array([injections[b] for b in bus_order], dtype=float)
    else:
        if bus_order is None:
            raise PTAInvalidArgument("bus_order is required for array injections")
        ni = np.asarray(injections, dtype=float)
    if abs(math.fsum(ni)) > tol:
        raise PTAInvalidArgument("injection imbalance {0:.6g} MW".format(math.fsum(ni)))
    return sf.full(bus_order) @ ni


def dc_flows(buses, lines, reference, injections):
    """
    Flows from a direct solve of the susceptance system, used to cross-check shift factors
    """
    bus_ids = [b.id if isinstance(b, PTABus) else b for b in buses]
    position = {b: i for i, b in enumerate(bus_ids)}
    n = len(bus_ids)
    b_bus = np.zeros((n, n))
    for line in lines:
        i, j, y = position[line.from_bus], position[line.to_bus], 1.0 / line.reactance
        b_bus[i, i] += y
        b_bus[j, j] += y
        b_bus[i, j] -= y
        b_bus[j, i] -= y
    keep = [i for i, b in enumerate(bus_ids) if b != reference]
    angles = np.zeros(n)
    p = np.array([injections[b] for b in bus_ids], dtype=float)
    angles[keep] = np.linalg.solve(b_bus[np.ix_(keep, keep)], p[keep])
    return np.array([(angles[position[l.from_bus]] - angles[position[l.to_bus]]) / l.reactance for l in lines])


def curtailment_cost(total_violation, curve):
    """
    Greedy fill of the penalty segments in order; returns ($/h, per-segment MW)
    """
    if total_violation < 0:
        raise PTAInvalidArgument("violation must be non-negative")
    remaining = float(total_violation)
    split = []
    for cap, _ in curve.segments:
        take = remaining if cap is None else min(cap, remaining)
        split.append(take)
        remaining -= take
    if remaining > 1e-9:
        raise PTADomainError("violation of {0} MW exceeds the penalty curve".format(total_violation))
    cost = math.fsum(q * price for q, (_, price) in zip(split, curve.segments))
    return cost, split
