"""Outer-space simplicial branch and bound.

Branching happens in the space of the reciprocals ``t_j = 1/(c_j'x + d_j)`` of
the positive-exponent terms.  Each node is a simplex in that space; its
lower bound comes from :func:`~glmpbb.subsolve.solve_lb` and every new
vertex is priced with :func:`~glmpbb.subsolve.eval_psi`, whose minimizer
doubles as a feasible point for the incumbent.
"""
from __future__ import annotations

import enum
import heapq
import itertools
import logging
import math
import time
from dataclasses import dataclass, field, replace
from decimal import Decimal, localcontext
from typing import List, Optional, Union

import numpy as np

from .model import (DEFAULT_DELTA_POS, DomainError, GlmpInstance,
                    IndexPartition, ValidationReport, objective_h,
                    objective_nu, partition_terms, validate)
from .linprog import LpStatus
from .simplex_geom import (BoundsBox, SimplexNode, bisect, diameter,
                           initial_simplex)
from .subsolve import PsiBracket, eval_psi, solve_lb

log = logging.getLogger(__name__)


class Status(str, enum.Enum):
    EPS_OPTIMAL = "EpsOptimal"
    ITER_LIMIT = "IterLimit"
    TIME_LIMIT = "TimeLimit"
    NODE_LIMIT = "NodeLimit"
    CONVEX_SHORTCUT = "ConvexShortcut"


class InvalidInstanceError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("instance violates the standing assumptions: "
                         + "; ".join(report.violations))


@dataclass
class SolverConfig:
    """``epsilon`` is an absolute gap on the log objective (factor e**eps on h)."""

    epsilon: float = 1e-4
    max_iterations: int = 10 ** 6
    time_limit: float = 3600.0
    sub_tol: Optional[float] = None
    delta_pos: float = DEFAULT_DELTA_POS
    node_limit: int = 10 ** 7
    validate: bool = True

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.sub_tol is None:
            self.sub_tol = self.epsilon / 10.0
        if not 0 < self.sub_tol <= self.epsilon / 2.0:
            raise ValueError("sub_tol must lie in (0, epsilon/2]")


@dataclass(frozen=True)
class TraceRecord:
    """State at the termination test of iteration k.

    ``gap_bound`` is sum_j alpha_j / min_{t in S} t_j * d(S) for the node about
    to be expanded (nan when the pool is empty).
    """

    k: int
    lb: float
    ub: float
    gap: float
    active_nodes: int
    node_diameter: float
    gap_bound: float

    CSV_COLUMNS = ("k", "lb", "ub", "gap", "active_nodes", "node_diameter")

    def csv_row(self):
        return [self.k, repr(self.lb), repr(self.ub), repr(self.gap),
                self.active_nodes, repr(self.node_diameter)]


@dataclass
class SolveResult:
    status: Status
    t_star: np.ndarray
    x_star: np.ndarray
    ub: float
    lb: float
    gap: float
    h_value: float
    iterations: int
    nodes_created: int
    nodes_pruned: int
    psi_evaluations: int
    theorem5_bound: Union[int, float]
    bounds: Optional[BoundsBox] = None
    trace: List[TraceRecord] = field(default_factory=list)
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        bound = self.theorem5_bound
        return {
            "schema_version": 1,
            "status": self.status.value,
            "h_value": self.h_value,
            "ub": self.ub,
            "lb": self.lb,
            "gap": self.gap,
            "x_star": self.x_star.tolist(),
            "t_star": self.t_star.tolist(),
            "iterations": self.iterations,
            "nodes_created": self.nodes_created,
            "nodes_pruned": self.nodes_pruned,
            "psi_evaluations": self.psi_evaluations,
            "iteration_bound": bound if isinstance(bound, int) else "overflow",
            "wall_time": round(self.wall_time, 3),
        }


# -- helpers ----------------------------------------------------------------

def compute_t_bounds(instance: GlmpInstance,
                     partition: IndexPartition) -> BoundsBox:
    """t_lower_j = 1 / max_X(c_j'x + d_j), t_upper_j = 1 / min_X(c_j'x + d_j)."""
    if partition.p_bar == 0:
        raise ValueError("no positive exponents")
    lo, up = [], []
    for j in partition.j_plus:
        cj = instance.c[j]
        smin = instance.minimize_linear(cj)
        smax = instance.minimize_linear(-cj)
        for sol in (smin, smax):
            if sol.status is not LpStatus.OPTIMAL:
                raise RuntimeError(f"bounding LP for term {j}: {sol.status.value}")
        base_min = smin.value + instance.d[j]
        base_max = -smax.value + instance.d[j]
        if not base_min > 0:
            raise DomainError(f"term {j} reaches {base_min:.6g} on X")
        lo.append(1.0 / base_max)
        up.append(1.0 / base_min)
    lo, up = np.array(lo), np.array(up)
    # identical reciprocals can cross by an ulp when the term is constant
    up = np.maximum(up, lo)
    return BoundsBox(lo, up)


def refit_t(instance: GlmpInstance, partition: IndexPartition, x) -> np.ndarray:
    """Reciprocals of the positive-exponent terms at x."""
    bases = instance.bases(x)[list(partition.j_plus)]
    if np.any(~(bases > 0)):
        raise DomainError("positive-exponent term is nonpositive at x")
    return 1.0 / bases


def theorem5_bound(bounds: BoundsBox, alphas_plus, epsilon: float):
    """Worst-case iteration count from the volume argument.

    floor(prod(t_up - t_lo) / sqrt(p+1) * (sqrt(2) p sum(alpha/t_lo) / eps)**p),
    evaluated in 60-digit decimal arithmetic; ``math.inf`` above 2**63.
    """
    p = bounds.dim
    if p == 0:
        return 0
    with localcontext() as ctx:
        ctx.prec = 60
        widths = [Decimal(float(u)) - Decimal(float(l))
                  for u, l in zip(bounds.t_upper, bounds.t_lower)]
        prod = Decimal(1)
        for w in widths:
            prod *= w
        s = sum(Decimal(float(a)) / Decimal(float(l))
                for a, l in zip(alphas_plus, bounds.t_lower))
        ratio = Decimal(2).sqrt() * p * s / Decimal(float(epsilon))
        value = prod / Decimal(p + 1).sqrt() * ratio ** p
        if value >= 2 ** 63:
            return math.inf
        return int(value)


# -- the driver ----------------------------------------------------------------

class OuterSpaceBB:
    """Stateful branch-and-bound run; :func:`solve` is the usual entry point.

    Call :meth:`initialize` once, then :meth:`step` until it returns False.
    With ``keep_nodes`` every bounded node, pruned or not, is appended to
    :attr:`nodes` for later inspection.
    """

    def __init__(self, instance: GlmpInstance, config: SolverConfig = None,
                 keep_nodes: bool = False):
        self.instance = instance
        self.config = config or SolverConfig()
        self.partition = partition_terms(instance)
        if self.partition.p_bar == 0:
            raise ValueError("no positive exponents: use solve() for the convex case")
        self.alpha_plus = instance.alpha[list(self.partition.j_plus)]
        self.ub = math.inf
        self.x_star = None
        self.t_star = None
        self.heap = []
        self._order = itertools.count()
        self._ids = itertools.count()
        self._lb_floor = -math.inf
        self.iterations = 0
        self.nodes_created = 0
        self.nodes_pruned = 0
        self.psi_evaluations = 0
        self.trace: List[TraceRecord] = []
        self.status: Optional[Status] = None
        self.bounds = None
        self.root = None
        self._t0 = None
        self.keep_nodes = keep_nodes
        self.nodes: List[SimplexNode] = []

    # bounding ----------------------------------------------------------

    def psi(self, t) -> PsiBracket:
        bracket = eval_psi(self.instance, self.partition, t,
                           tol=self.config.sub_tol)
        self.psi_evaluations += 1
        if not bracket.converged:
            log.warning("psi subsolve stopped at gap %.3g > %.3g",
                        bracket.upper - bracket.lower, self.config.sub_tol)
        self._offer(bracket.x_arg)
        return bracket

    def _offer(self, x):
        value = objective_nu(self.instance, x)
        if value < self.ub:
            self.ub = value
            self.x_star = np.array(x, dtype=float)
            self.t_star = refit_t(self.instance, self.partition, x)

    def node_bound(self, node: SimplexNode) -> float:
        lowers = [b.lower for b in node.vertex_psi]
        res = solve_lb(node.vertices, lowers, self.alpha_plus,
                       tol=self.config.sub_tol)
        return res.lb_value

    def gap_bound(self, node: SimplexNode) -> float:
        d_min = node.matrix().min(axis=0)
        return float(np.sum(self.alpha_plus / d_min) * diameter(node))

    def _push(self, node):
        heapq.heappush(self.heap, (node.lb, next(self._order), node))

    # bookkeeping ---------------------------------------------------------

    @property
    def lb(self) -> float:
        floor = self.heap[0][0] if self.heap else self.ub
        self._lb_floor = max(self._lb_floor, floor)
        return min(self._lb_floor, self.ub)

    @property
    def active_nodes(self) -> int:
        return len(self.heap)

    # algorithm -----------------------------------------------------------

    def initialize(self):
        self._t0 = time.perf_counter()
        self.bounds = compute_t_bounds(self.instance, self.partition)
        root = initial_simplex(self.bounds, node_id=next(self._ids))
        brackets = tuple(self.psi(v) for v in root.vertices)
        root = replace(root, vertex_psi=brackets)
        root = replace(root, lb=self.node_bound(root))
        self.root = root
        if self.keep_nodes:
            self.nodes.append(root)
        self.nodes_created = 1
        self._push(root)
        return root

    def _record(self):
        lb, ub = self.lb, self.ub
        if self.heap:
            node = self.heap[0][2]
            d, gb = diameter(node), self.gap_bound(node)
        else:
            d = gb = math.nan
        self.trace.append(TraceRecord(self.iterations, lb, ub, ub - lb,
                                      len(self.heap), d, gb))

    def step(self) -> bool:
        """Run one iteration; returns False once a stopping rule fires."""
        cfg = self.config
        self._record()
        if self.ub - self.lb <= cfg.epsilon:
            self.status = Status.EPS_OPTIMAL
            return False
        if self.iterations >= cfg.max_iterations:
            self.status = Status.ITER_LIMIT
            return False
        if time.perf_counter() - self._t0 > cfg.time_limit:
            self.status = Status.TIME_LIMIT
            return False
        if self.nodes_created + 2 > cfg.node_limit:
            self.status = Status.NODE_LIMIT
            return False

        _, _, node = heapq.heappop(self.heap)
        ids = (next(self._ids), next(self._ids))
        c1, c2, i, j = bisect(node, ids)
        eta = c1.vertices[j]
        bracket = self.psi(eta)
        c1 = c1.with_psi(j, bracket)
        c2 = c2.with_psi(i, bracket)
        self.nodes_created += 2
        for child in (c1, c2):
            # a parent bound stays valid on its children
            child = replace(child, lb=max(self.node_bound(child), node.lb))
            if self.keep_nodes:
                self.nodes.append(child)
            if self.ub - child.lb <= cfg.epsilon:
                self.nodes_pruned += 1
            else:
                self._push(child)
        self.iterations += 1
        if self.iterations % 100 == 0:
            log.info("k=%d lb=%.8g ub=%.8g nodes=%d", self.iterations,
                     self.lb, self.ub, len(self.heap))
        return True

    def run(self) -> SolveResult:
        if self.root is None:
            self.initialize()
        while self.step():
            pass
        return self.result()

    def result(self) -> SolveResult:
        lb, ub = self.lb, self.ub
        return SolveResult(
            status=self.status, t_star=self.t_star, x_star=self.x_star,
            ub=ub, lb=lb, gap=ub - lb,
            h_value=objective_h(self.instance, self.x_star),
            iterations=self.iterations, nodes_created=self.nodes_created,
            nodes_pruned=self.nodes_pruned,
            psi_evaluations=self.psi_evaluations,
            theorem5_bound=theorem5_bound(self.bounds, self.alpha_plus,
                                          self.config.epsilon),
            bounds=self.bounds, trace=self.trace,
            wall_time=time.perf_counter() - self._t0)


def solve(instance: GlmpInstance, config: SolverConfig = None) -> SolveResult:
    """Globally minimize the instance to within ``config.epsilon`` in log scale."""
    config = config or SolverConfig()
    if config.validate:
        report = validate(instance, config.delta_pos)
        if not report.ok:
            raise InvalidInstanceError(report)
    partition = partition_terms(instance)
    if partition.p_bar > 0:
        return OuterSpaceBB(instance, config).run()

    # every exponent negative: the log objective is convex, one solve suffices
    t0 = time.perf_counter()
    bracket = eval_psi(instance, partition, np.empty(0), tol=config.sub_tol)
    x = bracket.x_arg
    ub = objective_nu(instance, x)
    lb = min(bracket.lower, ub)
    return SolveResult(
        status=Status.CONVEX_SHORTCUT, t_star=np.empty(0), x_star=x,
        ub=ub, lb=lb, gap=ub - lb, h_value=objective_h(instance, x),
        iterations=0, nodes_created=0, nodes_pruned=0, psi_evaluations=1,
        theorem5_bound=0, wall_time=time.perf_counter() - t0)
