"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import (PTAInfeasibleModel, PTASolverError, PTASolverTimeLimit, PTAInvalidArgument, PTAMissingDependency,
                     PTAEnvironmentError)
from .pta_logger import PTALogger
from dataclasses import dataclass, field
from scipy.optimize import linprog, milp, Bounds, LinearConstraint
import scipy.sparse as sp
import numpy as np
import hashlib
import time
import abc


class PTAProblemBuilder(object):
    """
    Column/row accumulator for a maximisation problem: max obj.x + offset
    """

    def __init__(self):
        self.names = []
        self.obj, self.lb, self.ub, self.integer = [], [], [], []
        self.row_names = {"ub": [], "eq": []}
        self.entries = {"ub": [], "eq": []}
        self.rhs = {"ub": [], "eq": []}
        self.offset = 0.0

    @property
    def n_cols(self):
        return len(self.names)

    def n_rows(self, kind):
        return len(self.row_names[kind])

    def add_columns(self, names, lb=0.0, ub=np.inf, obj=0.0, integer=False):
        names = list(names)
        count = len(names)
        start = self.n_cols
        self.names.extend(names)
        self.obj.append(np.broadcast_to(np.asarray(obj, dtype=float), (count,)).copy())
        self.lb.append(np.broadcast_to(np.asarray(lb, dtype=float), (count,)).copy())
        self.ub.append(np.broadcast_to(np.asarray(ub, dtype=float), (count,)).copy())
        self.integer.append(np.full(count, 1 if integer else 0, dtype=int))
        return np.arange(start, start + count)

    def add_rows(self, kind, names, local_rows, cols, vals, rhs):
        """
        kind is "ub" (row <= rhs) or "eq" (row == rhs); local_rows index into names
        """
        names = list(names)
        start = self.n_rows(kind)
        local_rows = np.asarray(local_rows, dtype=int)
        vals = np.asarray(vals, dtype=float)
        keep = vals != 0.0
        self.entries[kind].append((local_rows[keep] + start, np.asarray(cols, dtype=int)[keep], vals[keep]))
        self.row_names[kind].extend(names)
        self.rhs[kind].append(np.broadcast_to(np.asarray(rhs, dtype=float), (len(names),)).copy())
        return np.arange(start, start + len(names))

    def add_row(self, kind, name, cols, coefs, rhs):
        return int(self.add_rows(kind, [name], np.zeros(len(cols), dtype=int), cols, coefs, rhs)[0])

    def build(self):
        n = self.n_cols

        def stack(parts, dtype=float):
            return np.concatenate(parts).astype(dtype) if parts else np.zeros(0, dtype=dtype)

        def matrix(kind):
            entries = self.entries[kind]
            rows = stack([e[0] for e in entries], int)
            cols = stack([e[1] for e in entries], int)
            vals = stack([e[2] for e in entries])
            return sp.coo_matrix((vals, (rows, cols)), shape=(self.n_rows(kind), n)).tocsr()

        return PTALinearProblem(names=list(self.names), obj=stack(self.obj), lb=stack(self.lb), ub=stack(self.ub),
                                integrality=stack(self.integer, int),
                                a_ub=matrix("ub"), b_ub=stack(self.rhs["ub"]), ub_rows=list(self.row_names["ub"]),
                                a_eq=matrix("eq"), b_eq=stack(self.rhs["eq"]), eq_rows=list(self.row_names["eq"]),
                                offset=self.offset)


@dataclass
class PTALinearProblem:
    names: list
    obj: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    integrality: np.ndarray
    a_ub: sp.csr_matrix
    b_ub: np.ndarray
    ub_rows: list
    a_eq: sp.csr_matrix
    b_eq: np.ndarray
    eq_rows: list
    offset: float = 0.0

    @property
    def n_cols(self):
        return len(self.names)

    @property
    def is_mip(self):
        return bool(np.any(self.integrality))

    def copy(self):
        return PTALinearProblem(list(self.names), self.obj.copy(), self.lb.copy(), self.ub.copy(),
                                self.integrality.copy(), self.a_ub.copy(), self.b_ub.copy(), list(self.ub_rows),
                                self.a_eq.copy(), self.b_eq.copy(), list(self.eq_rows), self.offset)

    def fix(self, cols, values):
        cols = np.asarray(cols, dtype=int)
        self.lb[cols] = values
        self.ub[cols] = values

    def relax(self):
        out = self.copy()
        out.integrality[:] = 0
        return out

    def fingerprint(self, exclude_cols=(), exclude_eq=()):
        """
        sha256 over objective, matrices, right-hand sides and bounds

        Bounds of exclude_cols and right-hand sides of the exclude_eq rows are skipped.
        """
        digest = hashlib.sha256()
        keep = np.ones(self.n_cols, dtype=bool)
        keep[np.asarray(list(exclude_cols), dtype=int)] = False
        keep_eq = np.ones(len(self.b_eq), dtype=bool)
        keep_eq[np.asarray(list(exclude_eq), dtype=int)] = False
        for arr in (self.obj, self.b_ub, self.b_eq[keep_eq], self.lb[keep], self.ub[keep], self.integrality):
            digest.update(np.ascontiguousarray(arr, dtype=float).tobytes())
        for mat in (self.a_ub, self.a_eq):
            mat = mat.tocsr()
            mat.sort_indices()
            for arr in (mat.data, mat.indices, mat.indptr):
                digest.update(np.ascontiguousarray(arr).tobytes())
        digest.update(repr(self.offset).encode())
        return digest.hexdigest()


@dataclass
class PTABackendResult:
    status: str
    x: np.ndarray
    objective: float
    bound: float = None
    gap: float = 0.0
    eq_marginals: np.ndarray = None
    ub_marginals: np.ndarray = None
    lower_marginals: np.ndarray = None
    upper_marginals: np.ndarray = None
    basis_id: str = ""
    seconds: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def has_duals(self):
        return self.eq_marginals is not None


class PTASolverBackend(abc.ABC):
    """
    Narrow solver contract: LP with row duals, MILP with a relative gap

    Marginals follow the minimisation of -obj: d(min objective)/d(rhs) per row,
    and d(min objective)/d(bound) per column.
    """
    name = "abstract"
    supports_lp = True
    supports_milp = True
    returns_duals = True
    concurrent_solves = False

    @abc.abstractmethod
    def solve_lp(self, problem, time_limit=None):
        pass

    @abc.abstractmethod
    def solve_milp(self, problem, gap, time_limit=None, presolve=False):
        pass

    def capabilities(self):
        return {"name": self.name, "lp": self.supports_lp, "milp": self.supports_milp,
                "duals": self.returns_duals, "concurrent_solves": self.concurrent_solves}


def _basis_id(x, lb, ub, tol=1e-9):
    interior = (x > lb + tol) & (x < ub - tol)
    return hashlib.sha1(np.packbits(interior).tobytes()).hexdigest()[:12]


class PTAHighsBackend(PTASolverBackend):
    """
    HiGHS through scipy.optimize
    """
    name = "highs"

    def __init__(self):
        self.logger = self.init_logger()

    def init_logger(self):
        return PTALogger.init_logger(__name__)

    def solve_lp(self, problem, time_limit=None):
        options = {"presolve": True}
        if time_limit:
            options["time_limit"] = float(time_limit)
        has_ub, has_eq = problem.a_ub.shape[0] > 0, problem.a_eq.shape[0] > 0
        start = time.time()
        res = linprog(-problem.obj,
                      A_ub=problem.a_ub if has_ub else None, b_ub=problem.b_ub if has_ub else None,
                      A_eq=problem.a_eq if has_eq else None, b_eq=problem.b_eq if has_eq else None,
                      bounds=np.column_stack([problem.lb, problem.ub]), method="highs", options=options)
        seconds = time.time() - start
        self.logger.info("{0} - LP {1} cols, {2} rows: status {3} in {4:.2f}s".format(
            PTALogger.stamp(), problem.n_cols, problem.a_ub.shape[0] + problem.a_eq.shape[0], res.status, seconds))
        if res.status == 2:
            raise PTAInfeasibleModel("LP reported infeasible: {0}".format(res.message))
        if res.status == 1:
            raise PTASolverTimeLimit("LP stopped early: {0}".format(res.message))
        if res.status != 0:
            raise PTASolverError("LP failed: {0}".format(res.message))
        objective = -float(res.fun) + problem.offset
        return PTABackendResult(status="optimal", x=np.asarray(res.x), objective=objective, bound=objective,
                                eq_marginals=np.asarray(res.eqlin.marginals, dtype=float) if has_eq else np.zeros(0),
                                ub_marginals=np.asarray(res.ineqlin.marginals, dtype=float) if has_ub else np.zeros(0),
                                lower_marginals=np.asarray(res.lower.marginals, dtype=float),
                                upper_marginals=np.asarray(res.upper.marginals, dtype=float),
                                basis_id=_basis_id(res.x, problem.lb, problem.ub), seconds=seconds)

    def solve_milp(self, problem, gap, time_limit=None, presolve=False):
        if not (0.0 <= gap < 1.0):
            raise PTAInvalidArgument("gap must lie in [0,1), got {0}".format(gap))
        constraints = []
        if problem.a_ub.shape[0]:
            constraints.append(LinearConstraint(problem.a_ub, -np.inf, problem.b_ub))
        if problem.a_eq.shape[0]:
            constraints.append(LinearConstraint(problem.a_eq, problem.b_eq, problem.b_eq))
        options = {"mip_rel_gap": float(gap), "presolve": bool(presolve)}
        if time_limit:
            options["time_limit"] = float(time_limit)
        start = time.time()
        res = milp(-problem.obj, integrality=problem.integrality, bounds=Bounds(problem.lb, problem.ub),
                   constraints=constraints, options=options)
        seconds = time.time() - start
        self.logger.info("{0} - MILP {1} cols ({2} integer): status {3} in {4:.2f}s".format(
            PTALogger.stamp(), problem.n_cols, int(problem.integrality.sum()), res.status, seconds))
        if res.status == 2:
            raise PTAInfeasibleModel("MILP reported infeasible: {0}".format(res.message))
        if res.x is None:
            if res.status == 1:
                raise PTASolverTimeLimit("time limit reached without a feasible incumbent")
            raise PTASolverError("MILP failed: {0}".format(res.message))
        if res.status == 1:
            self.logger.warning("{0} - MILP stopped at the limit with gap {1}".format(
                PTALogger.stamp(), getattr(res, "mip_gap", None)))
        objective = -float(res.fun) + problem.offset
        dual_bound = getattr(res, "mip_dual_bound", None)
        bound = objective if dual_bound is None else -float(dual_bound) + problem.offset
        return PTABackendResult(status="optimal" if res.status == 0 else "limit", x=np.asarray(res.x),
                                objective=objective, bound=bound,
                                gap=float(getattr(res, "mip_gap", 0.0) or 0.0), seconds=seconds)


BACKENDS = {"highs": PTAHighsBackend}


def get_backend(name="highs"):
    try:
        return BACKENDS[name]()
    except KeyError:
        raise PTAInvalidArgument("unknown solver backend {0}".format(name))


def export_lp(problem, path):
    """
    Write the problem through the HiGHS model writer; .lp or .mps picks the format
    """
    if not path.lower().endswith((".lp", ".mps")):
        raise PTAInvalidArgument("use .lp or .mps as model file extension, got {0}".format(path))
    try:
        import highspy
    except ImportError:
        raise PTAMissingDependency("highspy is needed to write model files")
    matrix = sp.vstack([problem.a_ub, problem.a_eq], format="csc")
    lp = highspy.HighsLp()
    lp.num_col_ = problem.n_cols
    lp.num_row_ = matrix.shape[0]
    lp.sense_ = highspy.ObjSense.kMaximize
    lp.offset_ = float(problem.offset)
    lp.col_cost_ = problem.obj.tolist()
    lp.col_lower_ = problem.lb.tolist()
    lp.col_upper_ = problem.ub.tolist()
    lp.row_lower_ = [-highspy.kHighsInf] * len(problem.b_ub) + problem.b_eq.tolist()
    lp.row_upper_ = problem.b_ub.tolist() + problem.b_eq.tolist()
    lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
    lp.a_matrix_.num_col_ = problem.n_cols
    lp.a_matrix_.num_row_ = matrix.shape[0]
    lp.a_matrix_.start_ = matrix.indptr.tolist()
    lp.a_matrix_.index_ = matrix.indices.tolist()
    lp.a_matrix_.value_ = matrix.data.tolist()
    lp.integrality_ = [highspy.HighsVarType.kInteger if flag else highspy.HighsVarType.kContinuous
                       for flag in problem.integrality]
    lp.col_names_ = [name.replace(" ", "_") for name in problem.names]
    lp.row_names_ = [name.replace(" ", "_") for name in list(problem.ub_rows) + list(problem.eq_rows)]
    highs = highspy.Highs()
    highs.setOptionValue("output_flag", False)
    if highs.passModel(lp) == highspy.HighsStatus.kError:
        raise PTASolverError("HiGHS rejected the model")
    if highs.writeModel(path) == highspy.HighsStatus.kError:
        raise PTAEnvironmentError("could not write model file {0}".format(path))
    return path
