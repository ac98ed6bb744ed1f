"""Dense two-phase primal simplex for small and medium LPs.

Solves ``min g'x  s.t.  A x <= b,  lower <= x <= upper`` where either bound
vector may be missing (free variables are split).  Every other module of the
package uses :func:`solve_lp` as its linear oracle.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np


class LpStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


class LpStalledError(RuntimeError):
    """Raised when the pivot cap is hit before an optimal basis is found."""


@dataclass(frozen=True)
class LpTolerances:
    feasibility: float = 1e-9
    optimality: float = 1e-9
    pivot: float = 1e-11
    phase1: float = 1e-7
    degenerate_factor: int = 3
    pivot_cap_factor: int = 50


DEFAULT_TOLERANCES = LpTolerances()


@dataclass
class LpProblem:
    g: np.ndarray
    A: np.ndarray
    b: np.ndarray
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self):
        self.g = np.asarray(self.g, dtype=float).ravel()
        n = self.g.size
        self.A = np.asarray(self.A, dtype=float).reshape(-1, n)
        self.b = np.asarray(self.b, dtype=float).ravel()
        if self.A.shape[0] != self.b.size:
            raise ValueError(
                f"A has {self.A.shape[0]} rows but b has {self.b.size} entries")
        for name in ("lower", "upper"):
            vec = getattr(self, name)
            if vec is not None:
                vec = np.asarray(vec, dtype=float).ravel()
                if vec.size != n:
                    raise ValueError(f"{name} must have length {n}")
                setattr(self, name, vec)
        if self.lower is not None and self.upper is not None:
            if np.any(self.lower > self.upper):
                raise ValueError("lower bound exceeds upper bound")


@dataclass
class LpSolution:
    status: LpStatus
    x: Optional[np.ndarray]
    value: float
    iterations: int
    basis: Optional[np.ndarray] = None

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Tableau:
    """Row-major simplex tableau; the last row holds reduced costs and -z."""

    def __init__(self, table, basis, tol, cap, bland_after):
        self.T = table
        self.basis = basis
        self.tol = tol
        self.cap = cap
        self.bland_after = bland_after
        self.pivots = 0
        self.degenerate = 0
        self.bland = False

    @property
    def m(self):
        return self.T.shape[0] - 1

    def pivot(self, r, c):
        T = self.T
        T[r] /= T[r, c]
        col = T[:, c].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, c] = 0.0
        T[r, c] = 1.0
        self.basis[r] = c

    def _entering(self, ncols):
        rc = self.T[-1, :ncols]
        if self.bland:
            cand = np.flatnonzero(rc < -self.tol.optimality)
            return int(cand[0]) if cand.size else -1
        e = int(np.argmin(rc))
        return e if rc[e] < -self.tol.optimality else -1

    def _leaving(self, e):
        col = self.T[:-1, e]
        rows = np.flatnonzero(col > self.tol.pivot)
        if rows.size == 0:
            return -1, 0.0
        rhs = np.maximum(self.T[rows, -1], 0.0)
        ratios = rhs / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + self.tol.feasibility * (1.0 + abs(best))]
        # smallest basic index among ties keeps both pricing modes deterministic
        r = int(ties[np.argmin(self.basis[ties])])
        return r, best

    def run(self, ncols):
        """Pivot to optimality over the first ``ncols`` columns.

        Returns False when an entering column has no blocking row.
        """
        while True:
            e = self._entering(ncols)
            if e < 0:
                return True
            r, step = self._leaving(e)
            if r < 0:
                return False
            if step <= self.tol.feasibility:
                self.degenerate += 1
                if self.degenerate >= self.bland_after:
                    self.bland = True
            self.pivot(r, e)
            self.pivots += 1
            if self.pivots >= self.cap:
                raise LpStalledError(
                    f"simplex stalled after {self.pivots} pivots")


@dataclass(frozen=True)
class _StandardForm:
    """``x = offset + S y`` with ``y >= 0`` and rows ``A y + s = rhs``, ``s >= 0``."""

    S: np.ndarray
    offset: np.ndarray
    A: np.ndarray
    rhs: np.ndarray

    @property
    def shape(self):
        return self.A.shape

    def full(self) -> np.ndarray:
        return np.hstack([self.A, np.eye(self.A.shape[0])])


def _standard_form(problem: LpProblem) -> _StandardForm:
    """Shift finite bounds to zero, split free variables, add box rows."""
    n = problem.g.size
    lo = problem.lower if problem.lower is not None else np.full(n, -np.inf)
    up = problem.upper if problem.upper is not None else np.full(n, np.inf)
    cols = []
    offset = np.zeros(n)
    box = []
    for j in range(n):
        if np.isfinite(lo[j]):
            offset[j] = lo[j]
            cols.append((j, 1.0))
            if np.isfinite(up[j]):
                box.append((len(cols) - 1, up[j] - lo[j]))
        elif np.isfinite(up[j]):
            offset[j] = up[j]
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
    ns = len(cols)
    S = np.zeros((n, ns))
    for k, (j, s) in enumerate(cols):
        S[j, k] = s
    A = problem.A @ S
    rhs = problem.b - problem.A @ offset
    if box:
        B = np.zeros((len(box), ns))
        for i, (k, _) in enumerate(box):
            B[i, k] = 1.0
        A = np.vstack([A, B])
        rhs = np.concatenate([rhs, [w for _, w in box]])
    return _StandardForm(S, offset, A, rhs)


def _warm_tableau(sf: _StandardForm, basis, tol):
    """Phase-2 tableau for a given basis, or None if it is not primal feasible."""
    m, ns = sf.shape
    if basis is None or np.shape(basis) != (m,) or m == 0:
        return None
    full = np.hstack([sf.full(), sf.rhs[:, None]])
    try:
        body = np.linalg.solve(full[:, basis], full)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(body)) or np.any(body[:, -1] < -tol.feasibility):
        return None
    body[:, -1] = np.maximum(body[:, -1], 0.0)
    return np.vstack([body, np.zeros(ns + m + 1)])


def solve_lp(problem: LpProblem, tol: LpTolerances = DEFAULT_TOLERANCES,
             basis: Optional[np.ndarray] = None) -> LpSolution:
    """Solve ``problem`` with the two-phase primal simplex method.

    Dantzig pricing is used until ``3 (m + n)`` degenerate pivots have been
    seen, after which Bland's rule takes over for the rest of the solve.
    Raises :class:`LpStalledError` after ``50 (m + n)`` pivots.

    ``basis`` is the ``basis`` of an earlier solution over the same rows; if
    it is still primal feasible, phase 1 is skipped.  Only the cost vector
    may differ between the two problems.
    """
    return _solve_standard(_standard_form(problem), problem.g, tol, basis)


def _tableau(T, basis, tol, size):
    return _Tableau(T, basis, tol, cap=tol.pivot_cap_factor * max(size, 1),
                    bland_after=tol.degenerate_factor * max(size, 1))


def _solve_standard(sf: _StandardForm, g, tol, basis=None) -> LpSolution:
    m, ns = sf.shape
    size = m + ns
    warm = _warm_tableau(sf, basis, tol)
    if warm is not None:
        tab = _tableau(warm, np.array(basis, copy=True), tol, size)
        return _phase2(sf, tab, np.arange(m), ns + m, g)

    A, rhs = sf.A, sf.rhs
    neg = rhs < 0
    n_art = int(neg.sum())
    ncols = ns + m + n_art
    T = np.zeros((m + 1, ncols + 1))
    sign = np.where(neg, -1.0, 1.0)
    T[:m, :ns] = A * sign[:, None]
    T[:m, ns:ns + m] = np.diag(sign)
    T[:m, -1] = rhs * sign
    basis = np.arange(ns, ns + m)
    art_rows = np.flatnonzero(neg)
    for k, i in enumerate(art_rows):
        T[i, ns + m + k] = 1.0
        basis[i] = ns + m + k

    tab = _tableau(T, basis, tol, size)
    rows = np.arange(m)

    if n_art:
        T[-1, ns + m:ncols] = 1.0
        T[-1] -= T[art_rows].sum(axis=0)
        tab.run(ncols)
        if -T[-1, -1] > tol.phase1:
            return LpSolution(LpStatus.INFEASIBLE, None, np.nan, tab.pivots)
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if tab.basis[i] < ns + m:
                continue
            row = np.abs(tab.T[i, :ns + m])
            j = int(np.argmax(row))
            if row[j] > 1e-9:
                tab.pivot(i, j)
            else:
                keep[i] = False
        keep_full = np.append(keep, True)
        tab.T = np.ascontiguousarray(
            np.delete(tab.T[keep_full], np.s_[ns + m:ncols], axis=1))
        tab.basis = tab.basis[keep]
        rows = rows[keep]
        ncols = ns + m
    return _phase2(sf, tab, rows, ncols, g)


def _phase2(sf: _StandardForm, tab, rows, ncols, g):
    ns = sf.shape[1]
    T = tab.T
    c_full = np.zeros(ncols)
    c_full[:ns] = sf.S.T @ g
    T[-1, :] = 0.0
    T[-1, :ncols] = c_full
    T[-1] -= c_full[tab.basis] @ T[:-1]
    if not tab.run(ncols):
        return LpSolution(LpStatus.UNBOUNDED, None, -np.inf, tab.pivots)

    y_full = np.zeros(ncols)
    y_full[tab.basis] = tab.T[:-1, -1]
    y_full = _polish(sf.A[rows], sf.rhs[rows], tab.basis, y_full, ns)
    x = sf.offset + sf.S @ y_full[:ns]
    # a basis with dropped rows cannot seed a later solve
    basis = tab.basis.copy() if rows.size == sf.shape[0] else None
    return LpSolution(LpStatus.OPTIMAL, x, float(g @ x), tab.pivots, basis)


class LinearOracle:
    """Repeated minimization of different costs over one fixed region.

    Keeps the last few optimal bases.  A new cost whose reduced costs are
    nonnegative on one of them is answered from that basis with no pivots;
    otherwise the most recent basis warm-starts a fresh solve.  The answer
    is always an optimal basic solution, so callers see the same contract
    as :func:`solve_lp`.  Not thread safe; make one per worker.
    """

    def __init__(self, A, b, lower=None, upper=None,
                 tol: LpTolerances = DEFAULT_TOLERANCES, memory: int = 8):
        A = np.asarray(A, dtype=float)
        probe = LpProblem(np.zeros(A.shape[1]), A, b, lower, upper)
        self._sf = _standard_form(probe)
        self._full = self._sf.full()
        self.tol = tol
        self.memory = memory
        self._cache = []    # (basis, B^-1 [A I], x), most recent first
        self.hits = 0
        self.solves = 0

    def minimize(self, g) -> LpSolution:
        g = np.asarray(g, dtype=float).ravel()
        m, ns = self._sf.shape
        c_full = np.zeros(ns + m)
        c_full[:ns] = self._sf.S.T @ g
        for k, (basis, tableau, x) in enumerate(self._cache):
            reduced = c_full - c_full[basis] @ tableau
            if reduced.min() >= -self.tol.optimality:
                self.hits += 1
                if k:
                    self._cache.insert(0, self._cache.pop(k))
                return LpSolution(LpStatus.OPTIMAL, x, float(g @ x), 0, basis)
        warm = self._cache[0][0] if self._cache else None
        sol = _solve_standard(self._sf, g, self.tol, warm)
        self.solves += 1
        if sol.optimal and sol.basis is not None:
            try:
                tableau = np.linalg.solve(self._full[:, sol.basis], self._full)
            except np.linalg.LinAlgError:
                return sol
            self._cache.insert(0, (sol.basis, tableau, sol.x))
            del self._cache[self.memory:]
        return sol


def _polish(A, rhs, basis, y, ns):
    """Re-solve the final basis against the original rows to shed pivot drift."""
    if basis.size == 0:
        return y
    m = A.shape[0]
    full = np.hstack([A, np.eye(m)])
    Bmat = full[:, basis]
    try:
        yb = np.linalg.solve(Bmat, rhs)
    except np.linalg.LinAlgError:
        return y
    if not np.all(np.isfinite(yb)):
        return y
    old = np.abs(full @ y - rhs).max()
    z = np.zeros_like(y)
    z[basis] = np.maximum(yb, 0.0)
    if np.abs(full @ z - rhs).max() <= max(old, 1e-12):
        return z
    return y
