"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import PTAValidationError, PTAInvalidArgument, PTASolverError
from .pta_backend import PTAProblemBuilder, get_backend
from .pta_logger import PTALogger
from dataclasses import dataclass, field
import numpy as np
import itertools

BUILT_TOL = 1e-3
BINARY_TOL = 1e-6
INCUMBENT_TOL = 1e-6


def _names(prefix, *axes):
    return ["{0}[{1}]".format(prefix, ",".join(str(a) for a in combo)) for combo in itertools.product(*axes)]


class PTAModelInstance(object):
    """
    Assembled expansion model plus the index maps and data it was built from
    """

    def __init__(self, problem, cols, rows, data, options, backend):
        self.problem = problem
        self.cols = cols
        self.rows = rows
        self.data = data
        self.options = options
        self.backend = backend

    def __getattr__(self, item):
        data = self.__dict__.get("data", {})
        if item in data:
            return data[item]
        raise AttributeError(item)

    def w_entries(self):
        """
        (column, node index, line index, increment index) for every line decision column
        """
        out = []
        for n, l, q in zip(*np.nonzero(self.cols["w"] >= 0)):
            out.append((int(self.cols["w"][n, l, q]), int(n), int(l), int(q)))
        return out

    def node_index(self, node_id):
        try:
            return self.node_ids.index(node_id)
        except ValueError:
            raise PTAInvalidArgument("unknown node id {0}".format(node_id))

    def fingerprint(self):
        w = self.cols["w"]
        return self.problem.fingerprint(exclude_cols=w[w >= 0])


@dataclass
class PTAExpansionPlan:
    node_ids: list
    line_ids: list
    increments: list
    bus_ids: list
    tech_ids: list
    w: np.ndarray
    dG: np.ndarray
    dGr: np.ndarray
    objective: float = float("nan")
    bound: float = float("nan")
    gap: float = 0.0
    status: str = "optimal"

    def selected(self, node=None):
        out = []
        for n, l, q in zip(*np.nonzero(self.w > 0.5)):
            if node is None or self.node_ids[n] == node:
                out.append((self.node_ids[n], self.line_ids[l], self.increments[q]))
        return out

    def root_portfolio(self):
        return [(l, q) for _, l, q in self.selected(self.node_ids[0])]

    def builds(self, tol=BUILT_TOL):
        return [(self.node_ids[n], self.bus_ids[b], self.tech_ids[g], float(self.dG[n, b, g]))
                for n, b, g in zip(*np.nonzero(self.dG > tol))]

    def as_dict(self):
        return {"root": self.node_ids[0], "objective": self.objective, "bound": self.bound, "gap": self.gap,
                "status": self.status,
                "lines": [{"node": n, "line": l, "increment": q} for n, l, q in self.selected()],
                "generation": [{"node": n, "bus": b, "tech": g, "mw": mw} for n, b, g, mw in self.builds(0.0)],
                "retirement": [{"node": self.node_ids[n], "bus": self.bus_ids[b], "tech": self.tech_ids[g],
                                "mw": float(self.dGr[n, b, g])}
                               for n, b, g in zip(*np.nonzero(self.dGr > 0.0))]}

    @staticmethod
    def from_dict(raw, instance):
        """
        Rebuild a plan against the index sets of an assembled instance
        """
        shape_w = instance.cols["w"].shape
        shape_g = instance.cols["G"].shape
        plan = PTAExpansionPlan(list(instance.node_ids), list(instance.line_ids), list(instance.increments),
                                list(instance.bus_ids), list(instance.tech_ids), np.zeros(shape_w),
                                np.zeros(shape_g), np.zeros(shape_g), raw.get("objective", float("nan")),
                                raw.get("bound", float("nan")), raw.get("gap", 0.0), raw.get("status", "optimal"))
        try:
            for entry in raw.get("lines", []):
                n, l, q = (instance.node_index(entry["node"]), plan.line_ids.index(entry["line"]),
                           plan.increments.index(entry["increment"]))
                if instance.cols["w"][n, l, q] < 0:
                    raise PTAValidationError("plan selects a non-candidate increment {0}/{1}".format(
                        entry["line"], entry["increment"]))
                plan.w[n, l, q] = 1.0
            for key, target in (("generation", plan.dG), ("retirement", plan.dGr)):
                for entry in raw.get(key, []):
                    target[instance.node_index(entry["node"]), plan.bus_ids.index(entry["bus"]),
                           plan.tech_ids.index(entry["tech"])] = float(entry["mw"])
        except ValueError as e:
            raise PTAValidationError("plan does not match the case: {0}".format(e))
        return plan


@dataclass
class PTAPrimalDualSolution:
    """
    Primal quantities and unscaled duals of one fixed-binary LP

    Arrays are indexed [node, ...] in instance order: p[n,b,g,t], z[n,b,t,i],
    sl[n,l,t], NI[n,b,t], G[n,b,g], L[n,l], pi[n,b,t], theta[n,b,g,t], nu[n].
    """
    instance: PTAModelInstance
    objective: float
    x: np.ndarray
    w: np.ndarray
    dG: np.ndarray
    dGr: np.ndarray
    G: np.ndarray
    L: np.ndarray
    p: np.ndarray
    z: np.ndarray
    NI: np.ndarray
    sl: np.ndarray
    rps_shortfall: np.ndarray
    pi: np.ndarray
    theta: np.ndarray
    nu: np.ndarray
    basis_id: str = ""
    result: object = None
    problem: object = None
    label: str = "reference"

    def plan(self):
        inst = self.instance
        return PTAExpansionPlan(list(inst.node_ids), list(inst.line_ids), list(inst.increments), list(inst.bus_ids),
                                list(inst.tech_ids), self.w.copy(), self.dG.copy(), self.dGr.copy(), self.objective)

    def capital_cost(self, n):
        """
        c_cap of node n: every line and generation investment on its root path
        """
        inst = self.instance
        total = 0.0
        for m in inst.paths[n]:
            total += float(np.sum(self.w[m] * inst.line_cost))
            total += float(np.sum(self.dG[m] * inst.invest[m][None, :]))
        return total

    def operating_cost(self, n):
        inst = self.instance
        T = inst.T
        energy = inst.fuel[n] + inst.vom
        total = float(np.sum(self.G[n] * inst.fixed[None, :]))
        total += float(np.sum(self.p[n] * energy[None, :, None] * T[None, None, :]))
        total += float(np.sum(self.z[n] * T[None, :, None] * inst.seg_price[None, None, :]))
        total += float(np.sum(self.sl[n] * T[None, :])) * inst.line_price
        if inst.rps_price is not None:
            total += inst.rps_price * float(self.rps_shortfall[n])
        return total

    def node_term(self, n):
        inst = self.instance
        served_value = inst.load_value * float(np.sum(inst.D[n] * inst.T[None, :]))
        return served_value - self.operating_cost(n) - self.capital_cost(n)


@dataclass
class PTAKKTReport:
    max_stationarity: float
    max_complementarity: float
    duality_gap: float
    price_scale: float
    zero_profit: list = field(default_factory=list)
    tol: float = 1e-6

    @property
    def max_zero_profit(self):
        return max([abs(e["relative"]) for e in self.zero_profit] or [0.0])

    @property
    def ok(self):
        return (self.max_stationarity <= self.tol and self.max_complementarity <= self.tol
                and self.max_zero_profit <= self.tol)

    def as_dict(self):
        return {"max_stationarity": self.max_stationarity, "max_complementarity": self.max_complementarity,
                "duality_gap": self.duality_gap, "price_scale": self.price_scale,
                "max_zero_profit": self.max_zero_profit, "zero_profit": self.zero_profit, "ok": self.ok}


def build_expansion_mip(case, tree, blocks, rate=0.0778, period_years=5, backend=None, gap=0.005,
                        time_limit=None, expand_lines=True, frozen_fleet=False, at_most_one=None,
                        rps_soft_price=None, built_tol=BUILT_TOL, binary_tol=BINARY_TOL, presolve=False):
    """
    Assemble the expansion model over the tree and time blocks; capital cost of a
    decision at node n is charged to every node of the subtree rooted at n.
    """
    logger = PTALogger.init_logger(__name__)
    problems = case.validate()
    problems.extend(tree.validate().violations)
    if problems:
        raise PTAValidationError(problems)
    if len(blocks) == 0 or np.any(blocks.weights <= 0):
        raise PTAValidationError("every time block needs a positive duration")
    if np.max(blocks.hours) >= case.hours:
        raise PTAValidationError("time blocks reference hours beyond the case series")
    settings = case.settings
    at_most_one = settings.at_most_one_increment if at_most_one is None else at_most_one
    rps_price = settings.rps_soft_price if rps_soft_price is None else rps_soft_price

    node_ids = tree.ids
    pos = {nid: i for i, nid in enumerate(node_ids)}
    N = len(node_ids)
    bus_ids, tech_ids, line_ids = case.bus_ids, case.tech_ids, case.line_ids
    increments = case.increments.increments
    B, G, L, Q, T = len(bus_ids), len(tech_ids), len(line_ids), len(increments), len(blocks)
    caps = list(case.penalty.caps)
    I = len(caps)

    weights = np.array([tree.weight(nid, rate, period_years) for nid in node_ids])
    if np.any(weights <= 0):
        raise PTAValidationError("every node needs a positive probability-discount weight")
    subtree = np.array([weights[[pos[d] for d in tree.descendants(nid)]].sum() for nid in node_ids])
    paths = [[pos[m] for m in tree.path_to_root(nid)] for nid in node_ids]
    parent = [None if tree[nid].parent is None else pos[tree[nid].parent] for nid in node_ids]

    Tw = np.asarray(blocks.weights, dtype=float) * case.year_scale
    D = np.array([[blocks.demand(case, b, tree[nid].data.demand_growth) for b in bus_ids] for nid in node_ids])
    CA = np.array([[blocks.availability(case, b, g) for g in tech_ids] for b in bus_ids])
    techs = [case.technology(g) for g in tech_ids]
    fixed = np.array([t.fixed_cost for t in techs])
    vom = np.array([t.vom_cost for t in techs])
    fuel = np.array([[tree[nid].data.fuel_cost.get(t.id, t.fuel_cost) for t in techs] for nid in node_ids])
    invest = np.array([[tree[nid].data.investment_cost.get(t.id, t.investment_cost) for t in techs]
                       for nid in node_ids])
    rps = np.array([tree[nid].data.rps for nid in node_ids])
    renewable = np.array([t.is_renewable for t in techs])
    G0 = np.array([[case.fleet.capacity(b, g) for g in tech_ids] for b in bus_ids])
    L0 = np.array([l.initial_capacity for l in case.lines])
    sizes = np.array([case.increments.sizes[q] for q in increments])
    line_cost = np.zeros((L, Q))
    candidate = np.zeros((L, Q), dtype=bool)
    for li, l in enumerate(line_ids):
        for qi, q in enumerate(increments):
            if (l, q) in case.increments.costs:
                line_cost[li, qi] = case.increments.costs[(l, q)]
                candidate[li, qi] = expand_lines
    seg_price = np.array(case.penalty.prices)
    SF = case.shift_factors.full(bus_ids)

    builder = PTAProblemBuilder()
    cols = {}
    cols["w"] = np.full((N, L, Q), -1, dtype=int)
    for n in range(N):
        for li, qi in zip(*np.nonzero(candidate)):
            cols["w"][n, li, qi] = builder.add_columns(
                ["w[{0},{1},{2}]".format(node_ids[n], line_ids[li], increments[qi])], 0.0, 1.0,
                -line_cost[li, qi] * subtree[n], integer=True)[0]
    retire_ub = np.where((G0 > 0) & settings.allow_retirement & (not frozen_fleet), np.inf, 0.0)
    # techs that cannot be built get a zero upper bound, never a prohibitive cost
    buildable = np.array([t.buildable for t in techs]) & (not frozen_fleet)
    build_ub = np.broadcast_to(np.where(buildable, np.inf, 0.0)[None, None, :], (N, B, G)).ravel()
    build_obj = -np.where(buildable[None, :], invest, 0.0) * subtree[:, None]
    cols["dG"] = builder.add_columns(_names("dG", node_ids, bus_ids, tech_ids), 0.0, build_ub,
                                     build_obj[:, None, :].repeat(B, axis=1).ravel()).reshape(N, B, G)
    cols["dGr"] = builder.add_columns(_names("dGr", node_ids, bus_ids, tech_ids), 0.0,
                                      np.broadcast_to(retire_ub, (N, B, G)).ravel()).reshape(N, B, G)
    cols["G"] = builder.add_columns(_names("G", node_ids, bus_ids, tech_ids), 0.0, np.inf,
                                    np.broadcast_to((-weights[:, None] * fixed[None, :])[:, None, :],
                                                    (N, B, G)).ravel()).reshape(N, B, G)
    cols["L"] = builder.add_columns(_names("L", node_ids, line_ids), -np.inf, np.inf).reshape(N, L)
    energy = fuel + vom[None, :]
    p_obj = -(weights[:, None, None, None] * energy[:, None, :, None] * Tw[None, None, None, :])
    cols["p"] = builder.add_columns(_names("p", node_ids, bus_ids, tech_ids, range(T)), 0.0, np.inf,
                                    np.broadcast_to(p_obj, (N, B, G, T)).ravel()).reshape(N, B, G, T)
    z_obj = -(weights[:, None, None, None] * Tw[None, None, :, None] * seg_price[None, None, None, :])
    cols["z"] = builder.add_columns(_names("z", node_ids, bus_ids, range(T), range(1, I + 1)), 0.0, np.inf,
                                    np.broadcast_to(z_obj, (N, B, T, I)).ravel()).reshape(N, B, T, I)
    cols["NI"] = builder.add_columns(_names("NI", node_ids, bus_ids, range(T)), -np.inf, np.inf).reshape(N, B, T)
    sl_obj = -(weights[:, None, None] * Tw[None, None, :] * case.penalty.line_price)
    cols["sl"] = builder.add_columns(_names("sl", node_ids, line_ids, range(T)), 0.0, np.inf,
                                     np.broadcast_to(sl_obj, (N, L, T)).ravel()).reshape(N, L, T)
    if rps_price is not None:
        cols["s"] = builder.add_columns(_names("rps_short", node_ids), 0.0, np.inf, -weights * rps_price)
    builder.offset = float(case.penalty.load_value * np.sum(weights[:, None, None] * D * Tw[None, None, :]))

    rows = {}
    # cumulative line capacity, built at n is in service from the children of n
    rows["L"] = np.zeros((N, L), dtype=int)
    for n in range(N):
        for li in range(L):
            rc, rv = [cols["L"][n, li]], [1.0]
            if parent[n] is not None:
                for m in paths[parent[n]]:
                    for qi in np.flatnonzero(cols["w"][m, li] >= 0):
                        rc.append(cols["w"][m, li, qi])
                        rv.append(-sizes[qi])
            rows["L"][n, li] = builder.add_row("eq", "cap_line[{0},{1}]".format(node_ids[n], line_ids[li]),
                                               rc, rv, L0[li])
    rows["G"] = np.zeros((N, B, G), dtype=int)
    for n in range(N):
        local = np.arange(B * G)
        rc, rl, rv = [cols["G"][n].ravel()], [local], [np.ones(B * G)]
        for m in paths[n]:
            rc += [cols["dG"][m].ravel(), cols["dGr"][m].ravel()]
            rl += [local, local]
            rv += [-np.ones(B * G), np.ones(B * G)]
        rows["G"][n] = builder.add_rows("eq", _names("cap_gen", [node_ids[n]], bus_ids, tech_ids),
                                        np.concatenate(rl), np.concatenate(rc), np.concatenate(rv),
                                        G0.ravel()).reshape(B, G)
    rows["avail"] = np.zeros((N, B, G, T), dtype=int)
    for n in range(N):
        local = np.arange(B * G * T)
        rows["avail"][n] = builder.add_rows(
            "ub", _names("avail", [node_ids[n]], bus_ids, tech_ids, range(T)),
            np.concatenate([local, local]),
            np.concatenate([cols["p"][n].ravel(), np.repeat(cols["G"][n].ravel(), T)]),
            np.concatenate([np.ones(B * G * T), -CA.ravel()]), 0.0).reshape(B, G, T)
    rows["rps"] = np.zeros(N, dtype=int)
    for n in range(N):
        ren_cols = cols["p"][n][:, renewable, :]
        rc = list(ren_cols.ravel())
        rv = list(np.broadcast_to(-Tw, ren_cols.shape).ravel())
        if rps_price is not None:
            rc.append(cols["s"][n])
            rv.append(-1.0)
        rows["rps"][n] = builder.add_row("ub", "rps[{0}]".format(node_ids[n]), rc, rv,
                                         -rps[n] * float(np.sum(D[n] * Tw[None, :])))
    rows["inj"] = np.zeros((N, B, T), dtype=int)
    for n in range(N):
        local = np.arange(B * T)
        rl = [local]
        rc = [cols["NI"][n].ravel()]
        rv = [np.ones(B * T)]
        for g in range(G):
            rl.append(local)
            rc.append(cols["p"][n][:, g, :].ravel())
            rv.append(-np.ones(B * T))
        for i in range(I):
            rl.append(local)
            rc.append(cols["z"][n][:, :, i].ravel())
            rv.append(-np.ones(B * T))
        rows["inj"][n] = builder.add_rows("eq", _names("inj", [node_ids[n]], bus_ids, range(T)),
                                          np.concatenate(rl), np.concatenate(rc), np.concatenate(rv),
                                          -D[n].ravel()).reshape(B, T)
    rows["flow+"] = np.zeros((N, L, T), dtype=int)
    rows["flow-"] = np.zeros((N, L, T), dtype=int)
    for n in range(N):
        for key, sign in (("flow+", 1.0), ("flow-", -1.0)):
            rl, rc, rv = [], [], []
            for li in range(L):
                local = li * T + np.arange(T)
                for b in np.flatnonzero(SF[li]):
                    rl.append(local)
                    rc.append(cols["NI"][n, b])
                    rv.append(np.full(T, sign * SF[li, b]))
                rl += [local, local]
                rc += [np.full(T, cols["L"][n, li]), cols["sl"][n, li]]
                rv += [-np.ones(T), -np.ones(T)]
            rows[key][n] = builder.add_rows("ub", _names(key.replace("+", "_up").replace("-", "_dn"),
                                                         [node_ids[n]], line_ids, range(T)),
                                            np.concatenate(rl), np.concatenate(rc), np.concatenate(rv),
                                            0.0).reshape(L, T)
    rows["balance"] = np.zeros((N, T), dtype=int)
    for n in range(N):
        local = np.tile(np.arange(T), B)
        rows["balance"][n] = builder.add_rows("eq", _names("balance", [node_ids[n]], range(T)), local,
                                              cols["NI"][n].ravel(), np.ones(B * T), 0.0)
    for i, cap in enumerate(caps):
        if cap is None:
            continue
        for n in range(N):
            local = np.tile(np.arange(T), B)
            builder.add_rows("ub", _names("seg", [node_ids[n]], range(T), [i + 1]), local,
                             cols["z"][n][:, :, i].ravel(), np.ones(B * T), cap)
    if at_most_one:
        for n in range(N):
            for li in range(L):
                chosen = cols["w"][n, li][cols["w"][n, li] >= 0]
                if chosen.size > 1:
                    builder.add_row("ub", "one_inc[{0},{1}]".format(node_ids[n], line_ids[li]), chosen,
                                    np.ones(chosen.size), 1.0)

    problem = builder.build()
    data = dict(case=case, tree=tree, blocks=blocks, rate=rate, period_years=period_years, node_ids=node_ids,
                bus_ids=bus_ids, tech_ids=tech_ids, line_ids=line_ids, increments=increments, weights=weights,
                subtree=subtree, paths=paths, parent=parent, T=Tw, D=D, CA=CA, fixed=fixed, vom=vom, fuel=fuel,
                invest=invest, rps=rps, renewable=renewable, G0=G0, L0=L0, sizes=sizes, line_cost=line_cost,
                candidate=candidate, seg_price=seg_price, line_price=case.penalty.line_price,
                load_value=case.penalty.load_value, rps_price=rps_price, SF=SF)
    options = dict(gap=gap, time_limit=time_limit, built_tol=built_tol, binary_tol=binary_tol,
                   frozen_fleet=frozen_fleet, expand_lines=expand_lines, presolve=presolve)
    instance = PTAModelInstance(problem, cols, rows, data, options, backend or get_backend())
    logger.info("{0} - model assembled: {1} nodes, {2} columns ({3} binary), {4} rows".format(
        PTALogger.stamp(), N, problem.n_cols, int(problem.integrality.sum()),
        len(problem.ub_rows) + len(problem.eq_rows)))
    return instance


def _plan_from_x(instance, x, objective, bound, gap, status):
    cols = instance.cols
    w = np.zeros(cols["w"].shape)
    mask = cols["w"] >= 0
    w[mask] = np.round(x[cols["w"][mask]])
    return PTAExpansionPlan(list(instance.node_ids), list(instance.line_ids), list(instance.increments),
                            list(instance.bus_ids), list(instance.tech_ids), w, np.maximum(x[cols["dG"]], 0.0),
                            np.maximum(x[cols["dGr"]], 0.0), objective, bound, gap, status)


def solve_mip(instance):
    """
    Solve the assembled model to the instance gap; returns the expansion plan

    The incumbent's line decisions are re-solved as a fixed LP. An incumbent whose
    objective the LP does not reproduce is rejected and the MILP rerun without presolve.
    """
    logger = PTALogger.init_logger(__name__)
    opts = instance.options
    if not instance.problem.is_mip:
        res = instance.backend.solve_lp(instance.problem, opts["time_limit"])
        return _plan_from_x(instance, res.x, res.objective, res.bound, res.gap, res.status)
    presolve = opts.get("presolve", False)
    while True:
        res = instance.backend.solve_milp(instance.problem, opts["gap"], opts["time_limit"], presolve=presolve)
        plan = _plan_from_x(instance, res.x, res.objective, res.bound, res.gap, res.status)
        check = fix_and_solve_lp(instance, plan, label="incumbent check")
        drift = objective_gap(res.objective, check.objective)
        # the fixed LP may improve on the incumbent dispatch, never fall short of it or pass the bound
        short = check.objective < res.objective and drift > INCUMBENT_TOL
        above_bound = check.objective - res.bound > INCUMBENT_TOL * max(1.0, abs(res.bound))
        if not (short or above_bound):
            break
        logger.warning("{0} - incumbent objective {1:.9g} but fixed LP gives {2:.9g} (presolve {3})".format(
            PTALogger.stamp(), res.objective, check.objective, presolve))
        if not presolve:
            raise PTASolverError("MILP incumbent does not match its fixed-line LP ({0:.3g} relative)".format(drift))
        presolve = False
    plan.dG = np.maximum(check.dG, 0.0)
    plan.dGr = np.maximum(check.dGr, 0.0)
    plan.objective = check.objective
    logger.info("{0} - plan objective {1:.6g}, bound {2:.6g}, {3} line increments selected".format(
        PTALogger.stamp(), plan.objective, res.bound, len(plan.selected())))
    return plan


def _w_array(instance, w):
    if isinstance(w, PTAExpansionPlan):
        return np.asarray(w.w, dtype=float)
    if isinstance(w, dict):
        arr = np.zeros(instance.cols["w"].shape)
        for (node, line, q), value in w.items():
            arr[instance.node_index(node), instance.line_ids.index(line), instance.increments.index(q)] = value
        return arr
    arr = np.asarray(w, dtype=float)
    if arr.shape != instance.cols["w"].shape:
        raise PTAInvalidArgument("w has shape {0}, expected {1}".format(arr.shape, instance.cols["w"].shape))
    return arr


def fix_and_solve_lp(instance, w, fixes=(), label="reference"):
    """
    Fix every line decision, solve the LP and unscale its duals into prices

    fixes is an optional sequence of (columns, values) pinned on top of w.
    """
    logger = PTALogger.init_logger(__name__)
    arr = _w_array(instance, w)
    cols = instance.cols
    mask = cols["w"] >= 0
    values = arr[mask]
    rounded = np.round(values)
    if np.any(np.abs(values - rounded) > instance.options["binary_tol"]) or np.any((rounded != 0) & (rounded != 1)):
        raise PTAInvalidArgument("line decisions must be binary")
    if np.any(arr[~mask] > 0.5):
        raise PTAInvalidArgument("line decisions set on non-candidate increments")
    problem = instance.problem.relax()
    problem.fix(cols["w"][mask], rounded)
    for fc, fv in fixes:
        problem.fix(fc, fv)
    res = instance.backend.solve_lp(problem, instance.options["time_limit"])
    x = res.x
    weights, Tw = instance.weights, instance.T
    scale_t = weights[:, None] * Tw[None, :]
    pi = -res.eq_marginals[instance.rows["inj"]] / scale_t[:, None, :]
    theta = -res.ub_marginals[instance.rows["avail"]] / scale_t[:, None, None, :]
    nu = -res.ub_marginals[instance.rows["rps"]] / weights
    w_out = np.zeros(cols["w"].shape)
    w_out[mask] = rounded
    s = x[cols["s"]] if "s" in cols else np.zeros(len(weights))
    solution = PTAPrimalDualSolution(
        instance=instance, objective=res.objective, x=x, w=w_out, dG=x[cols["dG"]], dGr=x[cols["dGr"]],
        G=x[cols["G"]], L=x[cols["L"]], p=x[cols["p"]], z=x[cols["z"]], NI=x[cols["NI"]], sl=x[cols["sl"]],
        rps_shortfall=s, pi=pi, theta=theta, nu=nu, basis_id=res.basis_id, result=res, problem=problem,
        label=label)
    logger.info("{0} - {1} LP objective {2:.6g} (basis {3})".format(
        PTALogger.stamp(), label, res.objective, res.basis_id))
    return solution


def verify_kkt(solution, tol=1e-6):
    """
    Stationarity and complementarity of the dispatch conditions, zero profit of node-root builds
    and strong duality of the LP
    """
    inst = solution.instance
    case = inst.case
    energy = inst.fuel + inst.vom[None, :]
    ren = inst.renewable.astype(float)
    rc = (energy[:, None, :, None] + solution.theta - solution.pi[:, :, None, :]
          - solution.nu[:, None, None, None] * ren[None, None, :, None])
    price_scale = max(1.0, float(np.max(np.abs(solution.pi))) if solution.pi.size else 1.0)
    stationarity = float(np.max(np.maximum(-rc, 0.0))) / price_scale if rc.size else 0.0
    headroom = inst.CA[None, :, :, :] * solution.G[:, :, :, None] - solution.p
    complementarity = 0.0
    if rc.size:
        qty_scale = max(1.0, float(np.max(np.abs(solution.p))), float(np.max(np.abs(solution.G))))
        complementarity = max(float(np.max(np.abs(solution.p * rc))),
                              float(np.max(np.abs(solution.theta * headroom)))) / (price_scale * qty_scale)
    zero_profit = []
    root = 0
    built = solution.dG[root] > inst.options["built_tol"]
    for b, g in zip(*np.nonzero(built)):
        tech = case.technologies[g]
        earned = np.array([np.sum(inst.T * inst.CA[b, g] * solution.theta[n, b, g]) for n in range(len(inst.weights))])
        cost = inst.weights * (inst.invest[root, g] + tech.fixed_cost)
        residual = float(np.sum(cost - inst.weights * earned))
        scale = max(1.0, float(np.sum(inst.weights * inst.invest[root, g])))
        zero_profit.append({"bus": inst.bus_ids[b], "tech": inst.tech_ids[g], "mw": float(solution.dG[root, b, g]),
                            "residual": residual, "relative": residual / scale})
    res = solution.result
    problem = solution.problem
    dual = float(np.dot(problem.b_eq, res.eq_marginals)) if res.eq_marginals.size else 0.0
    dual += float(np.dot(problem.b_ub, res.ub_marginals)) if res.ub_marginals.size else 0.0
    finite_lb, finite_ub = np.isfinite(problem.lb), np.isfinite(problem.ub)
    dual += float(np.dot(problem.lb[finite_lb], res.lower_marginals[finite_lb]))
    dual += float(np.dot(problem.ub[finite_ub], res.upper_marginals[finite_ub]))
    primal = solution.objective - problem.offset
    gap = abs(-primal - dual) / max(1.0, abs(primal))
    return PTAKKTReport(stationarity, complementarity, gap, price_scale, zero_profit, tol)


def expected_generation_investment(plan, instance):
    """
    Probability-weighted MW additions per technology over the tree
    """
    phi = np.array([instance.tree[n].probability for n in instance.node_ids])
    totals = np.einsum("n,nbg->g", phi, plan.dG)
    return {g: float(totals[i]) for i, g in enumerate(instance.tech_ids)}


def objective_gap(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))
