"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import PTAValidationError, PTAInvalidArgument
from .pta_logger import PTALogger
from dataclasses import dataclass, field
from typing import Dict, List, Optional
import itertools
import math

LEVELS = ("low", "medium", "high")

PROBABILITY_TOL = 1e-9


@dataclass(frozen=True)
class PTANodeData:
    """
    Data realisation carried by a scenario node, resolved at ingestion
    """
    demand_growth: float = 1.0
    fuel_cost: Dict[str, float] = field(default_factory=dict)
    investment_cost: Dict[str, float] = field(default_factory=dict)
    rps: float = 0.0


@dataclass(frozen=True)
class PTAScenarioNode:
    id: str
    parent: Optional[str]
    depth: int
    probability: float
    data: PTANodeData = field(default_factory=PTANodeData)

    @property
    def is_root(self):
        return self.parent is None


@dataclass
class PTAValidationReport:
    violations: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def raise_if_invalid(self):
        if self.violations:
            raise PTAValidationError(self.violations)
        return self

    def as_dict(self):
        return {"ok": self.ok, "violations": list(self.violations), "warnings": list(self.warnings)}


class PTAScenarioTree(object):
    """
    Rooted scenario tree; node order is root first, then by depth, then input order
    """

    def __init__(self, nodes, allow_multistage=False):
        nodes = list(nodes)
        if not nodes:
            raise PTAValidationError("scenario tree is empty")
        order = {node.id: i for i, node in enumerate(nodes)}
        self.nodes = sorted(nodes, key=lambda n: (n.depth, order[n.id]))
        self.allow_multistage = allow_multistage
        self._by_id = {}
        for node in self.nodes:
            self._by_id.setdefault(node.id, node)
        self._children = {node.id: [] for node in self.nodes}
        for node in self.nodes:
            if node.parent is not None and node.parent in self._children:
                self._children[node.parent].append(node.id)

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __contains__(self, node_id):
        return node_id in self._by_id

    def __getitem__(self, node_id):
        try:
            return self._by_id[node_id]
        except KeyError:
            raise PTAInvalidArgument("unknown node id {0}".format(node_id))

    @property
    def ids(self):
        return [node.id for node in self.nodes]

    @property
    def root(self):
        roots = [node for node in self.nodes if node.parent is None]
        if not roots:
            raise PTAValidationError("missing root")
        return roots[0]

    @property
    def horizon(self):
        return max(node.depth for node in self.nodes)

    @property
    def stage_boundary(self):
        branching = [self._by_id[nid].depth for nid, kids in self._children.items() if len(kids) > 1]
        return (max(branching) if branching else 0) + 1

    def children(self, node_id):
        return list(self._children.get(node_id, []))

    def descendants(self, node_id):
        """
        The node itself plus every node whose root path contains it
        """
        out, stack = [], [node_id]
        while stack:
            current = stack.pop()
            out.append(current)
            stack.extend(reversed(self._children.get(current, [])))
        return out

    def path_to_root(self, node_id):
        return path_to_root(self, node_id)

    def validate(self):
        return validate_tree(self, allow_multistage=self.allow_multistage)

    def weight(self, node_id, rate, period_years):
        """
        phi_n * zeta_delta(n), the factor every node term carries in the objective
        """
        node = self[node_id]
        return node.probability * discount_factor(node.depth, rate, period_years)


def validate_tree(tree, allow_multistage=False, tol=PROBABILITY_TOL):
    report = PTAValidationReport()
    nodes = list(tree.nodes)
    if not nodes:
        report.violations.append("scenario tree is empty")
        return report
    seen = set()
    for node in nodes:
        if node.id in seen:
            report.violations.append("duplicate node id {0}".format(node.id))
        seen.add(node.id)
    by_id = {node.id: node for node in nodes}
    roots = [node for node in nodes if node.parent is None]
    if not roots:
        report.violations.append("missing root")
    elif len(roots) > 1:
        report.violations.append("multiple roots: {0}".format(", ".join(n.id for n in roots)))
    for root in roots:
        if root.depth != 1:
            report.violations.append("root {0} has depth {1}, expected 1".format(root.id, root.depth))
        if abs(root.probability - 1.0) > tol:
            report.violations.append("root {0} probability {1:.10g}, expected 1".format(root.id, root.probability))
    children = {}
    for node in nodes:
        if not (0.0 <= node.probability <= 1.0):
            report.violations.append("node {0} probability {1:.10g} outside [0,1]".format(node.id, node.probability))
        elif node.probability <= 0.0:
            report.violations.append("node {0} has zero probability".format(node.id))
        if node.parent is None:
            continue
        parent = by_id.get(node.parent)
        if parent is None:
            report.violations.append("dangling parent id {0} on node {1}".format(node.parent, node.id))
            continue
        children.setdefault(parent.id, []).append(node)
        if node.depth != parent.depth + 1:
            report.violations.append("node {0} depth {1} but parent {2} depth {3}".format(
                node.id, node.depth, parent.id, parent.depth))
    depths = sorted(set(node.depth for node in nodes))
    for depth in depths:
        total = math.fsum(node.probability for node in nodes if node.depth == depth)
        if abs(total - 1.0) > tol:
            report.violations.append("depth {0} probability sum {1:.10g}".format(depth, total))
    for parent_id, kids in children.items():
        total = math.fsum(kid.probability for kid in kids)
        if abs(total - by_id[parent_id].probability) > tol:
            report.violations.append("children of {0} sum to {1:.10g}, parent has {2:.10g}".format(
                parent_id, total, by_id[parent_id].probability))
        if by_id[parent_id].depth >= 2 and len(kids) > 1:
            message = "node {0} at depth {1} has {2} children (two-stage shape)".format(
                parent_id, by_id[parent_id].depth, len(kids))
            if allow_multistage:
                report.warnings.append(message)
            else:
                report.violations.append(message)
    for node in nodes:
        data = node.data
        if data.demand_growth < 0:
            report.violations.append("node {0} has negative demand growth".format(node.id))
        if not (0.0 <= data.rps <= 1.0):
            report.violations.append("node {0} RPS {1:.10g} outside [0,1]".format(node.id, data.rps))
    return report


def path_to_root(tree, node_id):
    """
    P(n) ordered root first, n included
    """
    node = tree[node_id]
    path = [node.id]
    guard = len(tree)
    while node.parent is not None:
        node = tree[node.parent]
        path.append(node.id)
        guard -= 1
        if guard < 0:
            raise PTAValidationError("cycle through node {0}".format(node_id))
    path.reverse()
    return path


def discount_factor(y, rate, period_years):
    """
    zeta_y for a stage of period_years identical years starting period*(y-1) years out
    """
    if rate <= -1:
        raise PTAInvalidArgument("discount rate must exceed -1, got {0}".format(rate))
    if int(period_years) != period_years or period_years < 1:
        raise PTAInvalidArgument("period_years must be an integer >= 1, got {0}".format(period_years))
    if int(y) != y or y < 1:
        raise PTAInvalidArgument("stage index must be an integer >= 1, got {0}".format(y))
    base = 1.0 + rate
    annuity = math.fsum(base ** (-k) for k in range(int(period_years)))
    return base ** (-period_years * (y - 1)) * annuity


@dataclass(frozen=True)
class PTAGridDimension:
    """
    One uncertainty with low/medium/high values

    target is one of demand, fuel_cost, investment_cost, rps; cost targets are
    multipliers on the technology base value for the listed techs.
    """
    name: str
    target: str
    levels: tuple
    techs: tuple = ()


@dataclass(frozen=True)
class PTAGridCombination:
    index: int
    levels: tuple
    values: tuple
    names: tuple

    @property
    def label(self):
        return "|".join("{0}={1}".format(n, l) for n, l in zip(self.names, self.levels))

    def as_dict(self):
        return {"index": self.index, "label": self.label,
                "levels": dict(zip(self.names, self.levels)), "values": dict(zip(self.names, self.values))}


GRID_TARGETS = ("demand", "fuel_cost", "investment_cost", "rps")


class PTAUncertaintyGrid(object):

    def __init__(self, dimensions):
        self.dimensions = list(dimensions)
        for dim in self.dimensions:
            if dim.target not in GRID_TARGETS:
                raise PTAValidationError("grid dimension {0} has unknown target {1}".format(dim.name, dim.target))

    def __len__(self):
        return 3 ** len(self.dimensions)

    def subset(self, names):
        missing = [n for n in names if n not in [d.name for d in self.dimensions]]
        if missing:
            raise PTAInvalidArgument("unknown grid dimensions: {0}".format(", ".join(missing)))
        return PTAUncertaintyGrid([d for d in self.dimensions if d.name in names])

    def node_data(self, combination, technologies, base=None):
        """
        Resolve a grid point into node data on top of the technology base values
        """
        base = base or PTANodeData()
        growth = base.demand_growth
        rps = base.rps
        fuel = {t.id: base.fuel_cost.get(t.id, t.fuel_cost) for t in technologies}
        invest = {t.id: base.investment_cost.get(t.id, t.investment_cost) for t in technologies}
        for dim, value in zip(self.dimensions, combination.values):
            if dim.target == "demand":
                growth = value
            elif dim.target == "rps":
                rps = value
            else:
                table = fuel if dim.target == "fuel_cost" else invest
                for tech in (dim.techs or tuple(table)):
                    if tech not in table:
                        raise PTAValidationError("grid dimension {0} names unknown technology {1}".format(
                            dim.name, tech))
                    table[tech] = table[tech] * value
        return PTANodeData(demand_growth=growth, fuel_cost=fuel, investment_cost=invest, rps=rps)


def enumerate_grid(grid):
    """
    Full Cartesian product in lexicographic order of (dimension order, low < medium < high)
    """
    for dim in grid.dimensions:
        if len(dim.levels) != 3:
            raise PTAValidationError("grid dimension {0} has {1} levels, expected 3".format(
                dim.name, len(dim.levels)))
    names = tuple(d.name for d in grid.dimensions)
    combos = []
    for index, picks in enumerate(itertools.product(range(3), repeat=len(grid.dimensions))):
        combos.append(PTAGridCombination(
            index=index,
            levels=tuple(LEVELS[p] for p in picks),
            values=tuple(float(d.levels[p]) for d, p in zip(grid.dimensions, picks)),
            names=names))
    PTALogger.init_logger(__name__).debug("{0} - enumerated {1} grid combinations".format(
        PTALogger.stamp(), len(combos)))
    return combos
