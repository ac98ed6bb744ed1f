"""Brute-force references for checking the solver.  Never used by it."""
from __future__ import annotations

import itertools
import math

import numpy as np

from .linprog import LpStatus
from .model import GlmpInstance, objective_h, partition_terms
from .simplex_geom import BoundsBox, diameter, initial_simplex
from .subsolve import eval_psi

MAX_GRID_DIM = 3


def compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    out = []
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        row = []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(total + parts - 2 - prev)
        out.append(row)
    return np.array(out, dtype=float).reshape(-1, parts)


def grid_error_bound(bounds: BoundsBox, alphas_plus, resolution: int) -> float:
    """Lipschitz bound on how far the grid minimum can sit above the true one.

    |d psi / d t_j| <= alpha_j / t_lower_j on the initial simplex, and every
    point of it lies within d(S0) / resolution of a grid point.
    """
    root = initial_simplex(bounds)
    lip = float(np.sum(np.asarray(alphas_plus) / bounds.t_lower))
    return lip * diameter(root) / resolution


def _frontier(instance, plus, w_lo, w_hi, tol):
    """Vertices of the lower-left boundary of {(c_j'x + d_j)_j : x in X}.

    Two positive-exponent terms only.  Directions are swept between the
    weight vectors ``w_lo`` and ``w_hi`` by recursive normal splitting.
    """
    C, d = instance.c[plus], instance.d[plus]

    def lmo(w):
        sol = instance.minimize_linear(w @ C)
        if sol.status is not LpStatus.OPTIMAL:
            raise RuntimeError(f"frontier LP: {sol.status.value}")
        return C @ sol.x + d

    found = {}

    def keep(y):
        found.setdefault(y.tobytes(), y)

    ya, yb = lmo(w_lo), lmo(w_hi)
    keep(ya)
    keep(yb)
    stack = [(w_lo, ya, w_hi, yb)]
    while stack:
        wa, ya, wb, yb = stack.pop()
        e = yb - ya
        if np.abs(e).max() <= tol:
            continue
        w = np.array([-e[1], e[0]])
        if w.sum() < 0:
            w = -w
        if not np.all(w > 0):
            continue
        yc = lmo(w)
        if w @ yc >= w @ ya - tol * (1.0 + abs(w @ ya)):
            continue
        keep(yc)
        stack.append((wa, ya, w, yc))
        stack.append((w, yc, wb, yb))
    return np.array(list(found.values()))


def grid_min_psi(instance: GlmpInstance, resolution: int, bounds: BoundsBox = None,
                 tol: float = 1e-8, fast: bool = True):
    """Minimum of the psi upper estimate over a barycentric grid of S0.

    Returns (value, t).  With no negative exponents and at most two positive
    ones, psi is read off the exact frontier of term values instead of one
    LP per grid point (``fast``); the winning point is re-priced by
    :func:`eval_psi` either way.
    """
    from .bb import compute_t_bounds

    part = partition_terms(instance)
    k = part.p_bar
    if not 1 <= k <= MAX_GRID_DIM:
        raise ValueError(f"grid oracle needs 1 <= p_bar <= {MAX_GRID_DIM}, got {k}")
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    if bounds is None:
        bounds = compute_t_bounds(instance, part)
    V = np.array(initial_simplex(bounds).vertices)
    T = compositions(resolution, k + 1) / resolution @ V
    plus = list(part.j_plus)
    alpha = instance.alpha[plus]

    if fast and not part.j_minus and k <= 2:
        W = T * alpha
        if k == 1:
            sol = instance.minimize_linear(instance.c[plus[0]])
            Y = (instance.c[plus] @ sol.x + instance.d[plus])[None, :]
        else:
            ratio = W[:, 1] / W[:, 0]
            w_lo = W[np.argmin(ratio)]
            w_hi = W[np.argmax(ratio)]
            Y = _frontier(instance, plus, w_lo, w_hi, tol)
        values = (W @ Y.T).min(axis=1) - (np.log(T) + 1.0) @ alpha
        best = int(np.argmin(values))
        t = T[best]
        return eval_psi(instance, part, t, tol=tol).upper, t

    best_val, best_t = math.inf, None
    for t in T:
        val = eval_psi(instance, part, t, tol=tol).upper
        if val < best_val:
            best_val, best_t = val, t
    return best_val, best_t


def enumerate_vertices(A, b, feas_tol: float = 1e-9,
                       max_combinations: int = 2_000_000) -> np.ndarray:
    """Every basic feasible point of {x : A x <= b}, one per row."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if math.comb(m, n) > max_combinations:
        raise ValueError(f"C({m}, {n}) row subsets is too many to enumerate")
    idx = np.array(list(itertools.combinations(range(m), n)), dtype=int)
    if idx.size == 0:
        return np.empty((0, n))
    M = A[idx]
    rhs = b[idx]
    det = np.linalg.det(M)
    scale = np.abs(M).max(axis=(1, 2)) ** n
    ok = np.abs(det) > 1e-10 * np.maximum(scale, 1e-300)
    if not ok.any():
        return np.empty((0, n))
    X = np.linalg.solve(M[ok], rhs[ok][..., None])[..., 0]
    slack = X @ A.T - b
    feas = np.all(slack <= feas_tol * (1.0 + np.abs(b)), axis=1)
    return X[feas]


def vertex_min_h(instance: GlmpInstance):
    """Minimum of h over the vertices of X; exact when every exponent is positive.

    With positive exponents ln h is a sum of concave functions, so its
    minimum over a polytope is attained at a vertex.
    """
    if np.any(instance.alpha <= 0):
        raise ValueError("vertex enumeration is exact only for positive exponents")
    X = enumerate_vertices(instance.A, instance.b)
    if X.shape[0] == 0:
        raise ValueError("feasible region has no vertices (empty or unbounded)")
    values = [objective_h(instance, x) for x in X]
    best = int(np.argmin(values))
    return values[best], X[best]
