"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import (PTABaseException, PTAInvalidArgument, PTANoBeneficiaries, PTAInconsistencyError,
                     PTAValidationError)
from .pta_allocation import allocate_load_only, allocate_load_and_gen, LOAD_ONLY, POLICIES
from .pta_backend import get_backend
from .pta_benefits import load_benefit, generator_unit_benefit
from .pta_logger import PTALogger
from .pta_optimizer import PTAExpansionPlan, build_expansion_mip, fix_and_solve_lp
from .pta_scenario import PTAScenarioNode, PTAScenarioTree, enumerate_grid
from .pta_system import PTASystemCase, PTAFleetState
from .pta_timeseries import full_year_blocks
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import pandas as pd
import numpy as np
import hashlib
import json

EVALUATION_NODE = "evaluation"
SHARE_TOL = 1e-9


def plan_id(plan):
    """
    Short content hash of a plan's first-stage decisions
    """
    raw = plan.as_dict()
    root = plan.node_ids[0]
    first = {"lines": [e for e in raw["lines"] if e["node"] == root],
             "generation": [e for e in raw["generation"] if e["node"] == root],
             "retirement": [e for e in raw["retirement"] if e["node"] == root]}
    return hashlib.sha256(json.dumps(first, sort_keys=True).encode()).hexdigest()[:12]


def root_plan(raw, case):
    """
    First-stage decisions of a plan mapping, laid out over the case index sets
    """
    raw = raw.get("plan", raw)
    root = raw.get("root")
    if root is None:
        raise PTAValidationError("plan has no root node")
    bus_ids, tech_ids, line_ids = case.bus_ids, case.tech_ids, case.line_ids
    increments = case.increments.increments
    w = np.zeros((1, len(line_ids), len(increments)))
    dG = np.zeros((1, len(bus_ids), len(tech_ids)))
    dGr = np.zeros_like(dG)
    try:
        for entry in raw.get("lines", []):
            if entry["node"] == root:
                w[0, line_ids.index(entry["line"]), increments.index(entry["increment"])] = 1.0
        for key, target in (("generation", dG), ("retirement", dGr)):
            for entry in raw.get(key, []):
                if entry["node"] == root:
                    target[0, bus_ids.index(entry["bus"]), tech_ids.index(entry["tech"])] = float(entry["mw"])
    except (ValueError, KeyError) as e:
        raise PTAValidationError("plan does not match the case: {0}".format(e))
    return PTAExpansionPlan([root], list(line_ids), list(increments), list(bus_ids), list(tech_ids), w, dG, dGr,
                            raw.get("objective", float("nan")))


def augment_case(case, plan, added=()):
    """
    Case with the plan's first-stage lines and generation folded into the existing system

    added is a sequence of (line, increment) built on top of the plan.
    """
    root = plan.node_ids[0]
    extra = {}
    for _, line, q in plan.selected(root):
        extra[line] = extra.get(line, 0.0) + case.increments.sizes[q]
    for line, q in added:
        if line not in case.line_ids:
            raise PTAInvalidArgument("added expansion on unknown line {0}".format(line))
        if q not in case.increments.sizes:
            raise PTAInvalidArgument("added expansion uses unknown increment {0}".format(q))
        extra[line] = extra.get(line, 0.0) + case.increments.sizes[q]
    lines = [replace(l, initial_capacity=l.initial_capacity + extra.get(l.id, 0.0)) for l in case.lines]
    existing = dict(case.fleet.existing)
    for b, bus in enumerate(plan.bus_ids):
        for g, tech in enumerate(plan.tech_ids):
            change = float(plan.dG[0, b, g] - plan.dGr[0, b, g])
            if change != 0.0:
                existing[(bus, tech)] = max(existing.get((bus, tech), 0.0) + change, 0.0)
    fleet = PTAFleetState(existing={k: v for k, v in existing.items() if v > 0},
                          availability=case.fleet.availability)
    return PTASystemCase(case.name, case.buses, lines, case.shift_factors, case.increments, case.penalty,
                         case.technologies, fleet, case.demand, case.settings, case.grid, case.evaluation)


def build_oos_lp(case, plan, combo, grid, frozen_fleet=False, added=(), backend=None, blocks=None):
    """
    One operating year with the plan's first stage fixed, over every hour of the case series
    unless representative blocks are given

    Generation may still be added within the year unless frozen_fleet is set.
    """
    if case.hours == 0:
        raise PTAInvalidArgument("case has no hourly series")
    data = grid.node_data(combo, case.technologies, case.evaluation)
    tree = PTAScenarioTree([PTAScenarioNode(EVALUATION_NODE, None, 1, 1.0, data)])
    blocks = full_year_blocks(case.hours) if blocks is None else blocks
    return build_expansion_mip(augment_case(case, plan, added), tree, blocks, rate=0.0,
                               period_years=1, backend=backend, expand_lines=False, frozen_fleet=frozen_fleet)


def pairing_fingerprint(instance):
    """
    Model hash with the capacity rows that carry the fixed first stage left out,
    together with the retirement bounds that follow the carried-over fleet
    """
    skip = np.concatenate([instance.rows["L"].ravel(), instance.rows["G"].ravel()])
    return instance.problem.fingerprint(exclude_cols=instance.cols["dGr"].ravel(), exclude_eq=skip)


@dataclass
class PTASweepRecord:
    index: int
    label: str
    levels: dict
    gross_benefit: float = None
    load: dict = field(default_factory=dict)
    gen: dict = field(default_factory=dict)
    shares: dict = None
    error: str = None

    @property
    def ok(self):
        return self.error is None

    def as_dict(self):
        return {"index": self.index, "label": self.label, "levels": self.levels,
                "gross_benefit": self.gross_benefit, "load": self.load,
                "gen": {"/".join(k): v for k, v in self.gen.items()},
                "shares": None if self.shares is None else
                {"/".join(k) if isinstance(k, tuple) else k: v for k, v in self.shares.items()},
                "error": self.error}


@dataclass
class PTASweepResult:
    records: list
    plan_id: str
    counter_plan_id: str
    policy: str = LOAD_ONLY
    added: tuple = ()
    frozen_fleet: bool = False

    def __len__(self):
        return len(self.records)

    @property
    def failed(self):
        return [r for r in self.records if not r.ok]

    @property
    def succeeded(self):
        return [r for r in self.records if r.ok]

    def participants(self):
        keys = []
        for record in self.succeeded:
            for key in list(record.load) + list(record.gen):
                if key not in keys:
                    keys.append(key)
        return keys

    def as_frame(self):
        """
        One row per combination: levels, gross benefit, per-participant deltas and shares
        """
        rows = []
        for record in self.records:
            row = {"index": record.index, "label": record.label, "gross_benefit": record.gross_benefit,
                   "error": record.error or ""}
            for key, value in record.load.items():
                row["load:{0}".format(key)] = value
            for key, value in record.gen.items():
                row["gen:{0}".format("/".join(key))] = value
            for key, value in (record.shares or {}).items():
                row["share:{0}".format("/".join(key) if isinstance(key, tuple) else key)] = value
            rows.append(row)
        return pd.DataFrame(rows)


def realized_shares(load, gen, existing, policy):
    try:
        if policy == LOAD_ONLY:
            return dict(allocate_load_only(load).ratios)
        return dict(allocate_load_and_gen(load, gen, existing).ratios)
    except PTANoBeneficiaries:
        return None


def evaluate_combo(args):
    """
    Expansion and counterfactual LPs of one grid point; errors become a marked record
    """
    case, plan, counter_plan, grid, combo, policy, frozen_fleet, added, backend_name, blocks = args
    record = PTASweepRecord(combo.index, combo.label, dict(zip(combo.names, combo.levels)))
    try:
        backend = get_backend(backend_name)
        expansion = build_oos_lp(case, plan, combo, grid, frozen_fleet, added, backend, blocks)
        counterfactual = build_oos_lp(case, counter_plan, combo, grid, frozen_fleet, added, backend, blocks)
        if pairing_fingerprint(expansion) != pairing_fingerprint(counterfactual):
            raise PTAInconsistencyError("paired models differ beyond the fixed first stage")
        zero = np.zeros(expansion.cols["w"].shape)
        sol_e = fix_and_solve_lp(expansion, zero, label="out-of-sample {0}".format(combo.index))
        sol_c = fix_and_solve_lp(counterfactual, zero, label="out-of-sample counterfactual {0}".format(combo.index))
        record.gross_benefit = sol_e.objective - sol_c.objective
        record.load = {b: load_benefit(sol_e, sol_c, b).delta for b in case.bus_ids}
        existing = {k: v for k, v in case.fleet.existing.items() if v > 0}
        record.gen = {k: generator_unit_benefit(sol_e, sol_c, k[0], k[1]).delta for k in existing}
        record.shares = realized_shares(record.load, record.gen, existing, policy)
    except PTABaseException as e:
        record.error = str(e)
    return record


def _order(records):
    ok = sorted([r for r in records if r.ok], key=lambda r: (-r.gross_benefit, r.index))
    return ok + sorted([r for r in records if not r.ok], key=lambda r: r.index)


def sweep(case, plan, counter_plan, grid=None, combos=None, policy=LOAD_ONLY, workers=1, frozen_fleet=False,
          added=(), backend="highs", blocks=None):
    """
    Evaluate both plans over every grid combination, ranked by gross social benefit
    """
    logger = PTALogger.init_logger(__name__)
    if plan is None or counter_plan is None:
        raise PTAInvalidArgument("sweep needs both the expansion and the counterfactual plan")
    if policy not in POLICIES:
        raise PTAInvalidArgument("unknown allocation policy {0}".format(policy))
    grid = case.grid if grid is None else grid
    combos = enumerate_grid(grid) if combos is None else list(combos)
    jobs = [(case, plan, counter_plan, grid, c, policy, frozen_fleet, tuple(added), backend, blocks) for c in combos]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(evaluate_combo, jobs))
    else:
        records = [evaluate_combo(job) for job in jobs]
    result = PTASweepResult(_order(records), plan_id(plan), plan_id(counter_plan), policy, tuple(added),
                            frozen_fleet)
    for record in result.failed:
        logger.warning("{0} - combination {1} failed: {2}".format(PTALogger.stamp(), record.index, record.error))
    logger.info("{0} - sweep over {1} combinations completed, {2} failed".format(
        PTALogger.stamp(), len(records), len(result.failed)))
    return result


def later_stage_scenario(case, plan, counter_plan, added, grid=None, combos=None, **kwargs):
    """
    Re-evaluate a plan pair with later line expansions in service for both
    """
    for line, q in added:
        if line not in case.line_ids or q not in case.increments.sizes:
            raise PTAInvalidArgument("invalid added expansion {0}/{1}".format(line, q))
    return sweep(case, plan, counter_plan, grid=grid, combos=combos, added=added, **kwargs)


@dataclass
class PTADivergenceReport:
    participants: list
    status: str = "ok"
    failed: int = 0
    used: int = 0

    @property
    def flagged(self):
        return [p["participant"] for p in self.participants if p["flagged"]]

    def as_dict(self):
        return {"status": self.status, "failed": self.failed, "used": self.used,
                "participants": [dict(p, participant="/".join(p["participant"])
                                      if isinstance(p["participant"], tuple) else p["participant"])
                                 for p in self.participants]}


def ex_ante_vs_ex_post(result, ex_ante, bins=10):
    """
    Realized share histograms per participant against the ex ante ratio
    """
    if not len(result):
        raise PTAInvalidArgument("empty sweep")
    realized = [r for r in result.succeeded if r.shares is not None]
    report = PTADivergenceReport([], failed=len(result.failed), used=len(realized))
    if not realized:
        report.status = "no realized beneficiaries"
        return report
    keys = list(ex_ante.ratios)
    if set(keys) != set(realized[0].shares):
        raise PTAInvalidArgument("participant sets of the sweep and the ex ante allocation differ")
    edges = np.linspace(0.0, 100.0, bins + 1)
    for key in keys:
        values = np.array([r.shares.get(key, 0.0) for r in realized])
        counts, _ = np.histogram(values, bins=edges)
        lo, hi = float(values.min()), float(values.max())
        share = ex_ante.ratios[key]
        report.participants.append({
            "participant": key, "ex_ante": share, "min": lo, "max": hi, "mean": float(values.mean()),
            "counts": [int(c) for c in counts], "edges": [float(e) for e in edges],
            "flagged": share < lo - SHARE_TOL or share > hi + SHARE_TOL})
    return report
