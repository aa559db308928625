"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import PTAValidationError, PTACounterfactualError, PTASolverError, PTAInvalidArgument
from .pta_allocation import (PTAAllocationReport, allocate_load_only, allocate_load_and_gen, benefit_cost_ratios,
                             compare_scopes, LOAD_ONLY)
from .pta_backend import get_backend, export_lp
from .pta_benefits import compute_benefits, classification_violations
from .pta_case import load_case, load_scenarios
from .pta_counterfactual import PTACounterfactual, resolve_subset
from .pta_encoder import PTAEncoder, write_json, write_csv, write_percent_table, output_path
from .pta_evaluate import sweep, ex_ante_vs_ex_post, plan_id, root_plan
from .pta_fixtures import fixture_sets, read_benefits, split_key
from .pta_logger import PTALogger
from .pta_optimizer import (PTAExpansionPlan, build_expansion_mip, solve_mip, fix_and_solve_lp, verify_kkt,
                            expected_generation_investment)
from .pta_timeseries import cluster_days, case_net_load, full_year_blocks, HOURS_PER_DAY
import pandas as pd
import numpy as np
import json
import os


class PTAWorker(object):
    """
    Runs one subcommand end to end; every output is written only after all inputs are valid
    and every solve has finished
    """

    def __init__(self, config):
        self.config = config
        self.logger = self.init_logger()
        self.logger.debug("{0} - PTAWorker successfully initialized".format(PTALogger.stamp()))

    def init_logger(self):
        return PTALogger.init_logger(__name__)

    def _write(self, outputs):
        """
        outputs: list of (file name, writer, payload)
        """
        written = []
        for name, writer, payload in outputs:
            written.append(writer(output_path(self.config.out, name), payload))
        return written

    def _case(self):
        return load_case(self.config.case)

    def _tree(self, case):
        return load_scenarios(self.config.scenarios, case, allow_multistage=bool(self.config.multistage))

    def _blocks(self, case):
        days = case.hours // HOURS_PER_DAY
        if case.hours % HOURS_PER_DAY or self.config.days >= days:
            return full_year_blocks(case.hours)
        return cluster_days(case_net_load(case), self.config.days, self.config.seed)

    def _instance(self, case, tree, blocks):
        c = self.config
        return build_expansion_mip(case, tree, blocks, rate=c.discount_rate, period_years=c.period_years,
                                   backend=get_backend(c.backend), gap=c.gap, time_limit=c.time_limit,
                                   at_most_one=True if c.at_most_one else None,
                                   rps_soft_price=c.rps_soft_price if c.rps_soft_price else None,
                                   built_tol=c.built_tol, binary_tol=c.binary_tol, presolve=bool(c.presolve))

    def _setup(self):
        case = self._case()
        tree = self._tree(case)
        blocks = self._blocks(case)
        return case, tree, blocks, self._instance(case, tree, blocks)

    def _read_plan(self, path, instance):
        with open(path, "r") as handle:
            try:
                raw = json.load(handle)
            except ValueError as e:
                raise PTAValidationError("malformed plan file {0}: {1}".format(path, e))
        return PTAExpansionPlan.from_dict(raw.get("plan", raw), instance)

    def _reference(self, instance):
        plan = self._read_plan(self.config.plan, instance) if self.config.plan else solve_mip(instance)
        return fix_and_solve_lp(instance, plan, label="reference")

    def _subsets(self, reference):
        scope = self.config.scope
        plan = reference.plan()
        root = plan.node_ids[0]
        if not plan.selected(root):
            raise PTACounterfactualError("reference plan selects no line investment at the root")
        if scope in ("projects", "all"):
            lines = sorted({l for _, l, _ in plan.selected(root)})
            subsets = [resolve_subset(plan, "project:{0}".format(l)) for l in lines]
            if scope == "all":
                subsets.append(resolve_subset(plan, "portfolio"))
            return subsets
        return [resolve_subset(plan, scope)]

    def _counterfactual(self, instance, reference, subset):
        return PTACounterfactual(self.config.option, bool(self.config.all_years)).run(instance, reference, subset)

    def _allocate(self, report):
        c = self.config
        if c.policy == LOAD_ONLY:
            return allocate_load_only(report.load_deltas(), report.scope, report.total_cost or None,
                                      bool(c.compensate_losers))
        return allocate_load_and_gen(report.load_deltas(), report.gen_deltas(), report.existing_capacity(),
                                     report.scope, report.total_cost or None, bool(c.compensate_losers))

    def cmd_validate(self):
        case = self._case()
        problems = case.validate()
        summary = {"case": case.name, "buses": len(case.buses), "lines": len(case.lines),
                   "technologies": len(case.technologies), "hours": case.hours,
                   "shift_factors": case.shift_factors.as_dict(), "violations": problems, "warnings": []}
        if self.config.scenarios:
            tree = self._tree(case)
            report = tree.validate()
            summary.update(nodes=len(tree), horizon=tree.horizon, stage_boundary=tree.stage_boundary)
            summary["violations"] = summary["violations"] + report.violations
            summary["warnings"] = report.warnings
        summary["ok"] = not summary["violations"]
        if not summary["ok"]:
            raise PTAValidationError(summary["violations"])
        self._write([("validation.json", write_json, summary)])
        return summary

    def cmd_cluster(self):
        case = self._case()
        blocks = self._blocks(case)
        summary = {"days": list(blocks.days), "blocks": len(blocks), "total_weight": blocks.total_weight,
                   "wcss": blocks.wcss}
        self._write([("blocks.csv", write_csv, blocks.as_frame()), ("clustering.json", write_json, summary)])
        return summary

    def cmd_plan(self):
        case, tree, blocks, instance = self._setup()
        plan = solve_mip(instance)
        summary = {"plan": plan.as_dict(), "objective": plan.objective, "bound": plan.bound, "gap": plan.gap,
                   "status": plan.status, "plan_id": plan_id(plan),
                   "generation_investment": expected_generation_investment(plan, instance),
                   "blocks": len(blocks), "nodes": len(tree)}
        self._write([("plan.json", write_json, summary)])
        if self.config.export_lp:
            export_lp(instance.problem, output_path(self.config.out, self.config.export_lp))
        return summary

    def cmd_prices(self):
        case, tree, blocks, instance = self._setup()
        solution = self._reference(instance)
        kkt = verify_kkt(solution)
        rows = []
        for n, node in enumerate(instance.node_ids):
            for b, bus in enumerate(instance.bus_ids):
                for t in range(len(blocks)):
                    rows.append({"node": node, "bus": bus, "block": t, "price": solution.pi[n, b, t]})
        rps = pd.DataFrame({"node": instance.node_ids, "rps_price": solution.nu})
        summary = {"objective": solution.objective, "basis_id": solution.basis_id, "kkt": kkt.as_dict()}
        self._write([("prices.csv", write_csv, pd.DataFrame(rows)), ("rps_prices.csv", write_csv, rps),
                     ("kkt.json", write_json, summary)])
        return summary

    def cmd_counterfactual(self):
        case, tree, blocks, instance = self._setup()
        reference = self._reference(instance)
        results = []
        for subset in self._subsets(reference):
            cf = self._counterfactual(instance, reference, subset)
            results.append({"scope": subset.scope, "option": self.config.option, "objective": cf.objective,
                            "objective_delta": reference.objective - cf.objective, "plan": cf.plan().as_dict(),
                            "plan_id": plan_id(cf.plan())})
        summary = {"reference_objective": reference.objective, "counterfactuals": results}
        self._write([("counterfactual.json", write_json, summary)])
        return summary

    def _benefit_reports(self):
        case, tree, blocks, instance = self._setup()
        reference = self._reference(instance)
        reports = []
        for subset in self._subsets(reference):
            cf = self._counterfactual(instance, reference, subset)
            reports.append(compute_benefits(reference, cf, subset, tol=self.config.residual_tol))
        return reports

    def cmd_benefits(self):
        reports = self._benefit_reports()
        load_rows, gen_rows, account_rows, coverage_rows = [], [], [], []
        for report in reports:
            load_rows += [dict(item.as_dict(), scope=report.scope) for item in report.load]
            gen_rows += [dict(item.as_dict(), scope=report.scope) for item in report.generators]
            for run in ("expansion", "counterfactual", "delta"):
                account_rows.append(dict(report.accounts[run], scope=report.scope, run=run))
            coverage_rows += [dict(v, line=k, scope=report.scope) for k, v in report.coverage.items()]
        summary = {"reports": [r.as_dict() for r in reports],
                   "classification_violations": sum((classification_violations(r.generators) for r in reports), [])}
        self._write([("benefits.json", write_json, summary),
                     ("load_benefits.csv", write_csv, pd.DataFrame(load_rows)),
                     ("gen_benefits.csv", write_csv, pd.DataFrame(gen_rows)),
                     ("surplus_accounts.csv", write_csv, pd.DataFrame(account_rows)),
                     ("congestion_coverage.csv", write_csv, pd.DataFrame(coverage_rows))])
        return summary

    def _fixture_allocations(self):
        raw = read_benefits(self.config.benefits)
        scope = self.config.scope
        if "portfolio" not in raw:
            vectors = {scope: raw}
        elif isinstance(raw.get(scope), dict) and "load" in raw[scope]:
            vectors = {scope: raw[scope]}
        elif scope == "portfolio":
            vectors = {"portfolio": raw["portfolio"]}
        elif scope.startswith("project:"):
            name = scope.split(":", 1)[1]
            if name not in raw.get("projects", {}):
                raise PTAInvalidArgument("benefit file has no project {0}".format(name))
            vectors = {scope: raw["projects"][name]}
        elif scope in ("projects", "all"):
            vectors = {"project:{0}".format(k): v for k, v in raw.get("projects", {}).items()}
            if scope == "all":
                vectors["portfolio"] = raw["portfolio"]
        else:
            raise PTAInvalidArgument("unknown scope {0}".format(scope))
        generation = raw.get("generation") if self.config.policy != LOAD_ONLY else None
        reports = []
        for name, vector in vectors.items():
            cost = vector.get("cost")
            if self.config.policy == LOAD_ONLY:
                report = allocate_load_only(vector["load"], name, cost, bool(self.config.compensate_losers))
            else:
                gen = generation or {"gen": {}, "existing": {}}
                report = allocate_load_and_gen(vector["load"],
                                               {split_key(k): v for k, v in gen["gen"].items()},
                                               {split_key(k): v for k, v in gen["existing"].items()},
                                               name, cost, bool(self.config.compensate_losers))
            reports.append(report)
        return reports

    def cmd_allocate(self):
        if self.config.benefits:
            allocations = self._fixture_allocations()
        else:
            allocations = [self._allocate(report) for report in self._benefit_reports()]
        outputs, summary = [], {"policy": self.config.policy, "allocations": []}
        for report in allocations:
            entry = report.as_dict()
            if report.total_cost:
                entry["benefit_cost"] = {PTAEncoder.key(k): v for k, v in
                                         benefit_cost_ratios(report.benefits, report, report.total_cost).items()}
            summary["allocations"].append(entry)
            name = report.scope.replace(":", "_")
            outputs.append(("allocation_{0}.csv".format(name), write_percent_table, report.as_table()))
        projects = [r for r in allocations if r.scope.startswith("project:")]
        portfolio = [r for r in allocations if r.scope == "portfolio"]
        if projects and portfolio:
            comparison = compare_scopes(projects, portfolio[0])
            summary["comparison"] = {"flagged": [PTAEncoder.key(k) for k in comparison.flagged],
                                     "project_cost": comparison.project_cost,
                                     "portfolio_cost": comparison.portfolio_cost}
            outputs.append(("scope_comparison.csv", write_csv, comparison.as_frame().reset_index()))
        outputs.append(("allocation.json", write_json, summary))
        self._write(outputs)
        return summary

    def _plan_mapping(self, path):
        """
        Plan mapping from a plan.json or from the counterfactual.json entry matching the scope
        """
        with open(path, "r") as handle:
            try:
                raw = json.load(handle)
            except ValueError as e:
                raise PTAValidationError("malformed plan file {0}: {1}".format(path, e))
        if "counterfactuals" in raw:
            entries = raw["counterfactuals"]
            if not entries:
                raise PTAValidationError("counterfactual file {0} is empty".format(path))
            matching = [e for e in entries if e["scope"] == self.config.scope]
            return (matching or entries)[0]["plan"]
        return raw.get("plan", raw)

    def cmd_sweep(self):
        case = self._case()
        c = self.config
        if not c.plan or not c.counter_plan:
            raise PTAInvalidArgument("sweep needs --plan and --counter-plan")
        grid = case.grid.subset(c.grid.split(",")) if c.grid else case.grid
        plan = root_plan(self._plan_mapping(c.plan), case)
        counter_plan = root_plan(self._plan_mapping(c.counter_plan), case)
        ex_ante = self._ex_ante()
        result = sweep(case, plan, counter_plan, grid=grid, policy=c.policy, workers=c.workers,
                       frozen_fleet=bool(c.frozen_fleet), added=tuple(c.add or ()), backend=c.backend,
                       blocks=self._blocks(case) if c.representative else None)
        summary = {"plan_id": result.plan_id, "counter_plan_id": result.counter_plan_id,
                   "combinations": len(result), "failed": len(result.failed), "policy": result.policy,
                   "records": [r.as_dict() for r in result.records]}
        outputs = [("sweep.csv", write_csv, result.as_frame()), ("sweep.json", write_json, summary)]
        if ex_ante is not None:
            divergence = ex_ante_vs_ex_post(result, ex_ante, c.histogram_bins)
            hist_rows = []
            for p in divergence.participants:
                for i, count in enumerate(p["counts"]):
                    hist_rows.append({"participant": PTAEncoder.key(p["participant"]), "bin_low": p["edges"][i],
                                      "bin_high": p["edges"][i + 1], "count": count, "ex_ante": p["ex_ante"]})
            outputs += [("divergence.json", write_json, divergence.as_dict()),
                        ("histograms.csv", write_csv, pd.DataFrame(hist_rows))]
            summary["divergence"] = divergence.status
        self._write(outputs)
        if result.failed:
            raise PTASolverError("{0} of {1} combinations failed".format(len(result.failed), len(result)))
        return summary

    def _ex_ante(self):
        """
        Portfolio ratios from an allocation.json written by the allocate command
        """
        if not self.config.ex_ante:
            return None
        with open(self.config.ex_ante, "r") as handle:
            raw = json.load(handle)
        entries = raw.get("allocations", [])
        chosen = [e for e in entries if e["scope"] == "portfolio"] or entries
        if not chosen:
            raise PTAValidationError("allocation file {0} has no allocation".format(self.config.ex_ante))
        entry = chosen[0]
        benefits = {split_key(p["participant"]): p["benefit"] for p in entry["participants"]}
        ratios = {split_key(p["participant"]): p["ratio"] for p in entry["participants"]}
        return PTAAllocationReport(entry["policy"], entry["scope"], benefits, ratios)

    def cmd_fixtures(self):
        sets = fixture_sets()
        self._write([("fixtures.json", write_json, sets)])
        return {"written": "fixtures.json", "sets": sorted(sets)}

    def cmd_report(self):
        """
        Collect the artifacts found in the output directory into one summary
        """
        found = {}
        for name in ("validation.json", "clustering.json", "plan.json", "kkt.json", "counterfactual.json",
                     "benefits.json", "allocation.json", "sweep.json", "divergence.json"):
            path = os.path.join(self.config.out, name)
            if os.path.isfile(path):
                with open(path, "r") as handle:
                    found[name] = json.load(handle)
        if not found:
            raise PTAInvalidArgument("no artifacts found in {0}".format(self.config.out))
        summary = {"artifacts": sorted(found)}
        if "plan.json" in found:
            summary["plan"] = {k: found["plan.json"][k] for k in ("objective", "gap", "plan_id")}
            summary["lines"] = found["plan.json"]["plan"]["lines"]
        if "allocation.json" in found:
            summary["allocations"] = [{"scope": a["scope"], "load_share": a["load_share"],
                                       "gen_share": a["gen_share"],
                                       "ratios": {p["participant"]: round(p["ratio"], 2) for p in a["participants"]}}
                                      for a in found["allocation.json"]["allocations"]]
        if "sweep.json" in found:
            gross = [r["gross_benefit"] for r in found["sweep.json"]["records"] if r["gross_benefit"] is not None]
            summary["sweep"] = {"combinations": found["sweep.json"]["combinations"],
                                "failed": found["sweep.json"]["failed"],
                                "gross_min": min(gross) if gross else None,
                                "gross_max": max(gross) if gross else None,
                                "all_positive": bool(gross) and bool(np.all(np.array(gross) > 0))}
        if "divergence.json" in found:
            summary["divergence_flagged"] = [p["participant"] for p in found["divergence.json"]["participants"]
                                             if p["flagged"]]
        self._write([("report.json", write_json, summary)])
        return summary
