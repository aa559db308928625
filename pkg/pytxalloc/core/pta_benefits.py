"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import PTAInconsistencyError, PTAInvalidArgument
from .pta_logger import PTALogger
from dataclasses import dataclass, field
import numpy as np

CAPACITY_TOL = 1e-6
RESIDUAL_TOL = 1e-6
CLASSIFICATION_TOL = 1e-4

ZERO_BENEFIT = "zero-benefit"
BENEFICIARY = "beneficiary"
LOSER = "loser"
INDETERMINATE = "indeterminate"


@dataclass
class PTAGeneratorUnitBenefit:
    bus: str
    tech: str
    expansion: float
    counterfactual: float
    existing: float = 0.0
    classification: str = INDETERMINATE
    investment_scale: float = 0.0

    @property
    def delta(self):
        return self.expansion - self.counterfactual

    @property
    def aggregate(self):
        """
        Per-unit delta weighted by existing capacity
        """
        return self.existing * self.delta

    def as_dict(self):
        return {"bus": self.bus, "tech": self.tech, "expansion": self.expansion,
                "counterfactual": self.counterfactual, "delta": self.delta, "existing_mw": self.existing,
                "aggregate": self.aggregate, "classification": self.classification}


@dataclass
class PTALoadBenefit:
    bus: str
    expansion: float
    counterfactual: float

    @property
    def delta(self):
        return self.expansion - self.counterfactual

    def as_dict(self):
        return {"bus": self.bus, "expansion": self.expansion, "counterfactual": self.counterfactual,
                "delta": self.delta}


@dataclass
class PTACongestionRent:
    node: str
    total: float
    per_line: dict
    per_block: np.ndarray

    @property
    def attributed(self):
        return float(sum(self.per_line.values()))


@dataclass
class PTASurplusAccounts:
    node: str
    consumer: float
    producer: float
    congestion: float
    shortfall: float
    line: float
    rps: float
    capital: float
    node_term: float

    ACCOUNTS = ("consumer", "producer", "congestion", "shortfall", "line", "rps", "capital")
    # rps is the renewable credit value nu*(renewable - share*served); consumer and producer already carry it
    SIGNS = {"rps": -1.0}

    @classmethod
    def combine(cls, values):
        """
        Signed sum of an account mapping, the part of the node term the accounts explain
        """
        return sum(cls.SIGNS.get(a, 1.0) * values[a] for a in cls.ACCOUNTS)

    @property
    def residual(self):
        return self.node_term - self.combine({a: getattr(self, a) for a in self.ACCOUNTS})

    def as_dict(self):
        out = {a: getattr(self, a) for a in self.ACCOUNTS}
        out.update(node=self.node, node_term=self.node_term, residual=self.residual)
        return out


def _same_structure(solution, counterfactual):
    a, b = solution.instance, counterfactual.instance
    if a.node_ids != b.node_ids or len(a.T) != len(b.T) or not np.allclose(a.T, b.T):
        raise PTAInvalidArgument("solutions are not on the same tree and time blocks")


def _index(seq, item, kind):
    try:
        return list(seq).index(item)
    except ValueError:
        raise PTAInvalidArgument("unknown {0} {1}".format(kind, item))


def generator_unit_profit(solution, bus, tech, tol=CAPACITY_TOL):
    """
    Discounted expected operating profit of one MW of tech at bus, valued at the root

    Where cumulative capacity is ~0 a notional unit is valued at its available
    output whenever the price covers its energy cost.
    """
    inst = solution.instance
    b, g = _index(inst.bus_ids, bus, "bus"), _index(inst.tech_ids, tech, "technology")
    credit = 1.0 if inst.renewable[g] else 0.0
    total = 0.0
    for n in range(len(inst.node_ids)):
        margin = solution.pi[n, b] - inst.fuel[n, g] - inst.vom[g] + credit * solution.nu[n]
        capacity = solution.G[n, b, g]
        if capacity > tol:
            ratio = solution.p[n, b, g] / capacity
        else:
            if np.any(solution.p[n, b, g] > tol):
                raise PTAInconsistencyError("production without capacity for {0}/{1} at node {2}".format(
                    bus, tech, inst.node_ids[n]))
            ratio = inst.CA[b, g] * (margin > 0)
        unit = float(np.sum(inst.T * margin * ratio)) - inst.fixed[g]
        total += inst.weights[n] * unit
    return total


def classify_generator(built_expansion, built_counterfactual, tol):
    if tol <= 0:
        raise PTAInvalidArgument("tolerance must be positive")
    a, b = built_expansion > tol, built_counterfactual > tol
    if a and b:
        return ZERO_BENEFIT
    if a:
        return BENEFICIARY
    if b:
        return LOSER
    return INDETERMINATE


def generator_unit_benefit(solution, counterfactual, bus, tech, tol=None):
    _same_structure(solution, counterfactual)
    inst = solution.instance
    tol = inst.options["built_tol"] if tol is None else tol
    b, g = _index(inst.bus_ids, bus, "bus"), _index(inst.tech_ids, tech, "technology")
    return PTAGeneratorUnitBenefit(
        bus=bus, tech=tech,
        expansion=generator_unit_profit(solution, bus, tech),
        counterfactual=generator_unit_profit(counterfactual, bus, tech),
        existing=float(inst.G0[b, g]),
        classification=classify_generator(solution.dG[0, b, g], counterfactual.dG[0, b, g], tol),
        investment_scale=float(np.sum(inst.weights) * inst.invest[0, g]))


def load_surplus(solution, bus):
    inst = solution.instance
    b = _index(inst.bus_ids, bus, "bus")
    total = 0.0
    for n in range(len(inst.node_ids)):
        served = inst.D[n, b] - solution.z[n, b].sum(axis=1)
        price = inst.load_value - solution.pi[n, b] - solution.nu[n] * inst.rps[n]
        total += inst.weights[n] * float(np.sum(inst.T * price * served))
    return total


def load_benefit(solution, counterfactual, bus):
    _same_structure(solution, counterfactual)
    return PTALoadBenefit(bus, load_surplus(solution, bus), load_surplus(counterfactual, bus))


def congestion_rent(solution, node):
    """
    Load payments less generator revenue at nodal prices, plus its line attribution
    """
    inst = solution.instance
    n = inst.node_index(node)
    per_block = inst.T * np.sum(solution.pi[n] * -solution.NI[n], axis=0)
    flows = inst.SF @ solution.NI[n]
    per_line = {}
    for li, line in enumerate(inst.case.lines):
        f, t = inst.bus_ids.index(line.from_bus), inst.bus_ids.index(line.to_bus)
        per_line[line.id] = float(np.sum(inst.T * flows[li] * (solution.pi[n, t] - solution.pi[n, f])))
    return PTACongestionRent(node, float(per_block.sum()), per_line, per_block)


def surplus_decomposition(solution, tol=RESIDUAL_TOL):
    """
    Split every node objective term into surplus accounts; the residual must vanish
    """
    inst = solution.instance
    ren = inst.renewable.astype(float)
    out = []
    for n, node in enumerate(inst.node_ids):
        T = inst.T
        z = solution.z[n].sum(axis=2)
        served = inst.D[n] - z
        pi, nu = solution.pi[n], solution.nu[n]
        consumer = float(np.sum(T * (inst.load_value - pi - nu * inst.rps[n]) * served))
        margin = (pi[:, None, :] - (inst.fuel[n] + inst.vom)[None, :, None]
                  + nu * ren[None, :, None])
        producer = float(np.sum(T * margin * solution.p[n])) - float(np.sum(inst.fixed[None, :] * solution.G[n]))
        congestion = float(np.sum(T * pi * -solution.NI[n]))
        shortfall = float(np.sum(T[None, :, None] * (inst.load_value - inst.seg_price)[None, None, :]
                                 * solution.z[n]))
        line = -inst.line_price * float(np.sum(T * solution.sl[n]))
        renewable_out = float(np.sum(T * solution.p[n][:, inst.renewable, :]))
        rps = nu * (renewable_out - inst.rps[n] * float(np.sum(T * served)))
        if inst.rps_price is not None:
            rps += inst.rps_price * float(solution.rps_shortfall[n])
        accounts = PTASurplusAccounts(node, consumer, producer, congestion, shortfall, line, float(rps),
                                      -solution.capital_cost(n), solution.node_term(n))
        if abs(accounts.residual) > tol * max(1.0, abs(accounts.node_term)):
            raise PTAInconsistencyError("surplus identity residual {0:.6g} at node {1}".format(
                accounts.residual, node))
        out.append(accounts)
    return out


def expected(solution, accounts):
    """
    phi*zeta weighted sum of each account over the tree
    """
    weights = solution.instance.weights
    return {a: float(sum(w * getattr(acc, a) for w, acc in zip(weights, accounts)))
            for a in PTASurplusAccounts.ACCOUNTS + ("node_term",)}


def classification_violations(gen_benefits, tol=CLASSIFICATION_TOL):
    """
    Sign and zero checks implied by the build pattern of every (bus, tech)
    """
    problems = []
    for item in gen_benefits:
        scale = max(1.0, abs(item.investment_scale))
        if item.classification == ZERO_BENEFIT and abs(item.delta) > tol * scale:
            problems.append("{0}/{1}: zero-benefit pattern but delta {2:.6g}".format(item.bus, item.tech, item.delta))
        elif item.classification == BENEFICIARY and item.delta < -tol * scale:
            problems.append("{0}/{1}: beneficiary pattern but delta {2:.6g}".format(item.bus, item.tech, item.delta))
        elif item.classification == LOSER and item.delta > tol * scale:
            problems.append("{0}/{1}: loser pattern but delta {2:.6g}".format(item.bus, item.tech, item.delta))
    return problems


@dataclass
class PTABenefitReport:
    scope: str
    load: list
    generators: list
    congestion: dict
    accounts: dict
    reconciliation: dict
    coverage: dict = field(default_factory=dict)
    investment: dict = field(default_factory=dict)
    total_cost: float = 0.0

    def load_deltas(self):
        return {item.bus: item.delta for item in self.load}

    def existing_generators(self):
        """
        Allocation participants among generators: existing capacity only
        """
        return [item for item in self.generators if item.existing > 0]

    def gen_deltas(self):
        return {(item.bus, item.tech): item.delta for item in self.existing_generators()}

    def existing_capacity(self):
        return {(item.bus, item.tech): item.existing for item in self.existing_generators()}

    def bus_generation(self):
        """
        G0-weighted generator deltas summed per bus
        """
        out = {}
        for item in self.existing_generators():
            out[item.bus] = out.get(item.bus, 0.0) + item.aggregate
        return out

    @property
    def total_benefit(self):
        """
        Expected benefit gross of the line investment cost that differs between the runs
        """
        return self.reconciliation["gross_benefit"]

    @property
    def passes_cost_test(self):
        return self.total_benefit >= self.total_cost

    def as_dict(self):
        return {"scope": self.scope,
                "load": [item.as_dict() for item in self.load],
                "generators": [item.as_dict() for item in self.generators],
                "congestion": self.congestion, "accounts": self.accounts,
                "reconciliation": self.reconciliation, "coverage": self.coverage,
                "investment": self.investment, "total_cost": self.total_cost,
                "total_benefit": self.total_benefit, "passes_cost_test": self.passes_cost_test}


def line_capital(solution):
    inst = solution.instance
    return float(np.sum(inst.subtree[:, None, None] * solution.w * inst.line_cost[None, :, :]))


def removed_cost(solution, subset):
    """
    Expected annualized cost of the removed line investments, charged over each subtree
    """
    inst = solution.instance
    total = 0.0
    for node, line, q in subset.members:
        n = inst.node_index(node)
        total += inst.subtree[n] * inst.line_cost[inst.line_ids.index(line), inst.increments.index(q)]
    return total


def congestion_coverage(solution):
    """
    Expected congestion rent per line against the expected cost of increments built on it
    """
    inst = solution.instance
    rent = {line: 0.0 for line in inst.line_ids}
    for n, node in enumerate(inst.node_ids):
        for line, value in congestion_rent(solution, node).per_line.items():
            rent[line] += inst.weights[n] * value
    out = {}
    for li, line in enumerate(inst.line_ids):
        cost = float(np.sum(inst.subtree[:, None] * solution.w[:, li, :] * inst.line_cost[li][None, :]))
        out[line] = {"rent": rent[line], "cost": cost, "ratio": rent[line] / cost if cost > 0 else None}
    return out


def compute_benefits(solution, counterfactual, subset, tol=RESIDUAL_TOL):
    """
    Full benefit report of the reference against one counterfactual
    """
    logger = PTALogger.init_logger(__name__)
    _same_structure(solution, counterfactual)
    inst = solution.instance
    load = [load_benefit(solution, counterfactual, b) for b in inst.bus_ids]
    gens = [generator_unit_benefit(solution, counterfactual, b, g) for b in inst.bus_ids for g in inst.tech_ids]
    acc_ref = expected(solution, surplus_decomposition(solution, tol))
    acc_cf = expected(counterfactual, surplus_decomposition(counterfactual, tol))
    deltas = {a: acc_ref[a] - acc_cf[a] for a in acc_ref}
    objective_delta = solution.objective - counterfactual.objective
    explained = PTASurplusAccounts.combine(deltas)
    residual = objective_delta - explained
    if abs(residual) > tol * max(1.0, abs(solution.objective), abs(counterfactual.objective)):
        raise PTAInconsistencyError("benefit reconciliation residual {0:.6g}".format(residual))
    congestion = {}
    for node in inst.node_ids:
        congestion[node] = {"expansion": congestion_rent(solution, node).total,
                            "counterfactual": congestion_rent(counterfactual, node).total}
    phi = np.array([inst.tree[n].probability for n in inst.node_ids])
    investment = {g: {"expansion": float(np.einsum("n,nb->", phi, solution.dG[:, :, i])),
                      "counterfactual": float(np.einsum("n,nb->", phi, counterfactual.dG[:, :, i]))}
                  for i, g in enumerate(inst.tech_ids)}
    report = PTABenefitReport(
        scope=subset.scope, load=load, generators=gens, congestion=congestion,
        accounts={"expansion": acc_ref, "counterfactual": acc_cf, "delta": deltas},
        reconciliation={"objective_delta": objective_delta,
                        "gross_benefit": objective_delta + line_capital(solution) - line_capital(counterfactual),
                        "accounts_delta": explained, "residual": residual,
                        "load_delta": sum(item.delta for item in load)},
        coverage=congestion_coverage(solution), investment=investment,
        total_cost=removed_cost(solution, subset))
    logger.info("{0} - benefits for {1}: objective delta {2:.6g}, expected cost {3:.6g}".format(
        PTALogger.stamp(), subset.scope, objective_delta, report.total_cost))
    return report
