"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import PTANoBeneficiaries, PTAInvalidArgument
from .pta_logger import PTALogger
from dataclasses import dataclass, field
import pandas as pd

LOAD_ONLY = "load-only"
LOAD_AND_GEN = "load+gen"
POLICIES = (LOAD_ONLY, LOAD_AND_GEN)
LOAD_ROW = "load"


def participant_label(key):
    """
    "b1" for a load, "b1/coal" for an existing generator
    """
    if isinstance(key, tuple):
        return "/".join(str(k) for k in key)
    return str(key)


@dataclass
class PTAAllocationReport:
    policy: str
    scope: str
    benefits: dict
    ratios: dict
    total_cost: float = None
    allocated: dict = field(default_factory=dict)
    compensation: dict = field(default_factory=dict)

    @property
    def participants(self):
        return list(self.benefits)

    def ratio(self, key):
        return self.ratios[key]

    @property
    def load_share(self):
        return sum(r for k, r in self.ratios.items() if not isinstance(k, tuple))

    @property
    def gen_share(self):
        return sum(r for k, r in self.ratios.items() if isinstance(k, tuple))

    def with_cost(self, total_cost):
        """
        Attach a total cost; every participant pays its ratio of it
        """
        if total_cost is None or total_cost <= 0:
            raise PTAInvalidArgument("total cost must be positive, got {0}".format(total_cost))
        self.total_cost = float(total_cost)
        self.allocated = {k: r / 100.0 * self.total_cost for k, r in self.ratios.items()}
        self.compensation = {}
        return self

    def as_table(self):
        """
        Ratios in percent with buses as columns and participant kinds as rows
        """
        buses, rows = [], {}
        for key, value in self.ratios.items():
            bus, row = (key[0], key[1]) if isinstance(key, tuple) else (key, LOAD_ROW)
            if bus not in buses:
                buses.append(bus)
            rows.setdefault(row, {})[bus] = value
        frame = pd.DataFrame.from_dict(rows, orient="index").reindex(columns=buses).fillna(0.0)
        frame["sum"] = frame.sum(axis=1)
        frame.index.name = "participant"
        return frame

    def as_dict(self):
        out = {"policy": self.policy, "scope": self.scope, "total_cost": self.total_cost,
               "load_share": self.load_share, "gen_share": self.gen_share, "participants": []}
        for key in self.benefits:
            out["participants"].append({"participant": participant_label(key), "benefit": self.benefits[key],
                                        "ratio": self.ratios[key], "allocated": self.allocated.get(key),
                                        "compensation": self.compensation.get(key, 0.0)})
        return out


def _normalize(benefits):
    positive = {k: max(v, 0.0) for k, v in benefits.items()}
    total = sum(positive.values())
    if not total > 0.0:
        raise PTANoBeneficiaries("no beneficiaries")
    return {k: 100.0 * v / total for k, v in positive.items()}


def allocate_load_only(deltas, scope="portfolio", total_cost=None, compensate=False):
    """
    Cost shares of loads proportional to their positive benefit
    """
    logger = PTALogger.init_logger(__name__)
    benefits = {bus: float(v) for bus, v in deltas.items()}
    report = PTAAllocationReport(LOAD_ONLY, scope, benefits, _normalize(benefits))
    if total_cost is not None:
        report.with_cost(total_cost)
        if compensate:
            compensate_losers(report)
    logger.debug("{0} - load-only allocation over {1} buses for {2}".format(
        PTALogger.stamp(), len(benefits), scope))
    return report


def allocate_load_and_gen(load_deltas, gen_deltas, existing, scope="portfolio", total_cost=None,
                          compensate=False):
    """
    Loads and existing generators share one pool; a generator's benefit is its
    per-MW delta times its existing capacity at the bus where it sits
    """
    logger = PTALogger.init_logger(__name__)
    benefits = {bus: float(v) for bus, v in load_deltas.items()}
    for key, delta in gen_deltas.items():
        if not isinstance(key, tuple) or len(key) != 2:
            raise PTAInvalidArgument("generator keys are (bus, tech) pairs, got {0}".format(key))
        capacity = float(existing.get(key, 0.0))
        if capacity < 0:
            raise PTAInvalidArgument("negative existing capacity for {0}".format(participant_label(key)))
        benefits[key] = capacity * float(delta)
    report = PTAAllocationReport(LOAD_AND_GEN, scope, benefits, _normalize(benefits))
    if total_cost is not None:
        report.with_cost(total_cost)
        if compensate:
            compensate_losers(report)
    logger.debug("{0} - load+gen allocation: load {1:.4f}% / generation {2:.4f}%".format(
        PTALogger.stamp(), report.load_share, report.gen_share))
    return report


def compensate_losers(report):
    """
    Losers are paid their loss; beneficiaries fund cost plus compensation pro rata
    """
    if report.total_cost is None:
        raise PTAInvalidArgument("compensation needs a total cost")
    losses = {k: -v for k, v in report.benefits.items() if v < 0}
    pool = report.total_cost + sum(losses.values())
    report.compensation = dict(losses)
    report.allocated = {}
    for key in report.benefits:
        if key in losses:
            report.allocated[key] = -losses[key]
        else:
            report.allocated[key] = report.ratios[key] / 100.0 * pool
    return report


def benefit_cost_ratios(deltas, report, total_cost):
    """
    benefit over allocated cost per participant; None where no cost is allocated
    """
    if total_cost is None or total_cost <= 0:
        raise PTAInvalidArgument("total cost must be positive, got {0}".format(total_cost))
    out = {}
    for key, ratio in report.ratios.items():
        share = ratio / 100.0 * total_cost
        out[key] = float(deltas[key]) / share if share > 0 else None
    return out


@dataclass
class PTAScopeComparison:
    rows: list
    project_cost: float
    portfolio_cost: float

    @property
    def flagged(self):
        return [row["participant"] for row in self.rows if row["flagged"]]

    def as_frame(self):
        frame = pd.DataFrame(self.rows)
        frame["participant"] = frame["participant"].map(participant_label)
        return frame.set_index("participant")


def compare_scopes(project_reports, portfolio_report, portfolio_cost=None):
    """
    Summed project-by-project cost against the portfolio allocation

    A participant is flagged when its portfolio benefit is negative while the
    summed project allocations charge it a positive cost.
    """
    if not project_reports:
        raise PTAInvalidArgument("no project reports to compare")
    participants = set(portfolio_report.ratios)
    for report in project_reports:
        if set(report.ratios) != participants:
            raise PTAInvalidArgument("participant sets differ between {0} and {1}".format(
                report.scope, portfolio_report.scope))
        if report.total_cost is None:
            raise PTAInvalidArgument("project report {0} carries no cost".format(report.scope))
    project_cost = sum(r.total_cost for r in project_reports)
    if portfolio_cost is None:
        portfolio_cost = portfolio_report.total_cost if portfolio_report.total_cost is not None else project_cost
    rows = []
    for key in portfolio_report.ratios:
        summed = sum(r.allocated[key] for r in project_reports)
        portfolio = portfolio_report.ratios[key] / 100.0 * portfolio_cost
        benefit = portfolio_report.benefits[key]
        rows.append({"participant": key, "summed_cost": summed,
                     "summed_ratio": 100.0 * summed / project_cost if project_cost > 0 else 0.0,
                     "portfolio_cost": portfolio, "portfolio_ratio": portfolio_report.ratios[key],
                     "portfolio_benefit": benefit, "flagged": benefit < 0 and summed > 0})
    return PTAScopeComparison(rows, project_cost, portfolio_cost)
