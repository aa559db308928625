"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import PTACounterfactualError, PTAInvalidArgument
from .pta_logger import PTALogger
from .pta_optimizer import PTAModelInstance, PTAExpansionPlan, solve_mip, fix_and_solve_lp
from dataclasses import dataclass
import numpy as np

OPTIONS = (1, 2, 3)


@dataclass(frozen=True)
class PTAInvestmentSubset:
    """
    Line investments removed in a counterfactual, as (node, line, increment) triples
    """
    members: tuple
    scope: str = "portfolio"

    def __len__(self):
        return len(self.members)

    @property
    def lines(self):
        return sorted({line for _, line, _ in self.members})


def resolve_subset(reference, scope, node=None):
    """
    scope is "portfolio", "project:<line>" or a comma separated list of line[:increment] names
    """
    plan = reference.plan() if not isinstance(reference, PTAExpansionPlan) else reference
    node = plan.node_ids[0] if node is None else node
    chosen = plan.selected(node)
    if scope == "portfolio":
        return PTAInvestmentSubset(tuple(chosen), "portfolio")
    names = scope.split(":", 1)[1] if scope.startswith("project:") else scope
    members = []
    for token in [t.strip() for t in names.split(",") if t.strip()]:
        line, _, q = token.partition(":")
        hits = [m for m in chosen if m[1] == line and (not q or m[2] == q)]
        if not hits:
            raise PTACounterfactualError("{0} is not selected at node {1} in the reference plan".format(token, node))
        members.extend(h for h in hits if h not in members)
    label = scope if scope.startswith("project:") else "project:{0}".format(names)
    return PTAInvestmentSubset(tuple(members), label)


class PTACounterfactual(object):
    """
    Counterfactual builder for one option

    1 keeps every other line and generation decision of the reference,
    2 keeps the other lines and lets generation re-optimise,
    3 frees every other line decision as well.
    """

    def __init__(self, option=2, all_years=False):
        if option not in OPTIONS:
            raise PTAInvalidArgument("counterfactual option must be one of 1, 2, 3, got {0}".format(option))
        self.option = option
        self.all_years = all_years
        self.logger = self.init_logger()
        self.logger.debug("{0} - PTACounterfactual(option {1}) successfully initialized".format(
            PTALogger.stamp(), option))

    def init_logger(self):
        return PTALogger.init_logger(__name__)

    def build(self, instance, reference, subset):
        w_ref = np.asarray(reference.w, dtype=float)
        cols = instance.cols
        mask = cols["w"] >= 0
        for node, line, q in subset.members:
            n, l, k = instance.node_index(node), instance.line_ids.index(line), instance.increments.index(q)
            if cols["w"][n, l, k] < 0 or w_ref[n, l, k] < 0.5:
                raise PTACounterfactualError("{0}/{1} at node {2} is not selected in the reference plan".format(
                    line, q, node))
        problem = instance.problem.copy()
        if self.option in (1, 2):
            w_cf = np.round(w_ref)
            for node, line, q in subset.members:
                w_cf[instance.node_index(node), instance.line_ids.index(line), instance.increments.index(q)] = 0.0
            problem.fix(cols["w"][mask], w_cf[mask])
            if self.option == 1:
                problem.fix(cols["dG"].ravel(), np.asarray(reference.dG, dtype=float).ravel())
                problem.fix(cols["dGr"].ravel(), np.asarray(reference.dGr, dtype=float).ravel())
        else:
            for node, line, _ in subset.members:
                l = instance.line_ids.index(line)
                targets = range(len(instance.node_ids)) if self.all_years else [instance.node_index(node)]
                for n in targets:
                    sel = cols["w"][n, l][cols["w"][n, l] >= 0]
                    problem.fix(sel, np.zeros(sel.size))
        options = dict(instance.options, counterfactual=self.option, subset=subset.scope)
        return PTAModelInstance(problem, instance.cols, instance.rows, instance.data, options, instance.backend)

    def solve(self, cf_instance, label="counterfactual"):
        cols = cf_instance.cols
        mask = cols["w"] >= 0
        free = cf_instance.problem.lb[cols["w"][mask]] != cf_instance.problem.ub[cols["w"][mask]]
        if np.any(free):
            plan = solve_mip(cf_instance)
            return fix_and_solve_lp(cf_instance, plan, label=label)
        w = np.zeros(cols["w"].shape)
        w[mask] = cf_instance.problem.lb[cols["w"][mask]]
        return fix_and_solve_lp(cf_instance, w, label=label)

    def run(self, instance, reference, subset, label=None):
        cf = self.build(instance, reference, subset)
        solution = self.solve(cf, label or "counterfactual option {0} ({1})".format(self.option, subset.scope))
        self.logger.info("{0} - counterfactual option {1} on {2} member(s): objective {3:.6g}".format(
            PTALogger.stamp(), self.option, len(subset), solution.objective))
        return solution


def counterfactual_mode(option=2, all_years=False):
    return PTACounterfactual(option, all_years)


def build_counterfactual(instance, reference, subset, option=2, all_years=False):
    return PTACounterfactual(option, all_years).build(instance, reference, subset)
