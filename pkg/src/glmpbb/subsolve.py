"""Bounding engines: the parametric subproblem value psi(t) and LB(S).

Both convex solves use conditional gradient with away steps.  The only
oracle each needs is a linear minimization: an LP over X for psi, and a
coordinate argmin over the unit simplex for LB(S).  The Frank-Wolfe gap at
the returned iterate turns each solve into a certified two-sided estimate.
"""
from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from .linprog import LpStatus
from .model import DomainError, GlmpInstance, IndexPartition

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class SubproblemError(RuntimeError):
    pass


@dataclass
class PsiBracket:
    """Two-sided estimate lower <= psi(t) <= upper, with upper = phi(x_arg, t)."""

    lower: float
    upper: float
    x_arg: np.ndarray
    subsolver_iterations: int
    converged: bool = True


@dataclass
class RelaxResult:
    lb_value: float
    w_arg: np.ndarray
    fw_gap: float
    iterations: int
    converged: bool = True
    degenerate: bool = False


def lemma1_slack(a):
    """ln a + 1/a - 1, which is nonnegative for every a > 0."""
    a = np.asarray(a, dtype=float)
    if np.any(~(a > 0)):
        raise ValueError("argument must be positive")
    out = np.log(a) + 1.0 / a - 1.0
    return float(out) if out.ndim == 0 else out


# -- objectives ---------------------------------------------------------------

class _PsiObjective:
    """phi(., t) for fixed t, split into log terms (J-) and an affine part (J+)."""

    def __init__(self, instance: GlmpInstance, partition: IndexPartition, t):
        t = np.asarray(t, dtype=float).ravel()
        if t.size != partition.p_bar:
            raise ValueError(f"t must have {partition.p_bar} entries, got {t.size}")
        if np.any(~(t > 0)):
            raise DomainError("t must be strictly positive")
        jp = np.asarray(partition.j_plus, dtype=int)
        jm = np.asarray(partition.j_minus, dtype=int)
        a_p = instance.alpha[jp]
        self.Cm = instance.c[jm]
        self.dm = instance.d[jm]
        self.am = instance.alpha[jm]
        self.jm = jm
        # affine part: sum_{J+} alpha_j (t_j (c_j'x + d_j) - ln t_j - 1)
        self.lin = (a_p * t) @ instance.c[jp]
        self.const = float(a_p @ (t * instance.d[jp] - np.log(t) - 1.0))

    def value(self, x):
        bm = self.Cm @ x + self.dm
        if np.any(~(bm > 0)):
            j = int(self.jm[np.flatnonzero(~(bm > 0))[0]])
            raise DomainError(f"term {j} is nonpositive at x")
        return float(self.am @ np.log(bm) + self.lin @ x + self.const)

    def grad(self, x):
        bm = self.Cm @ x + self.dm
        return (self.am / bm) @ self.Cm + self.lin

    def along(self, x, direction):
        b0 = self.Cm @ x + self.dm
        db = self.Cm @ direction
        l0 = float(self.lin @ x + self.const)
        dl = float(self.lin @ direction)
        am = self.am
        if am.size <= 8:
            # scalar arithmetic beats numpy call overhead for a handful of terms
            terms = list(zip(am.tolist(), b0.tolist(), db.tolist()))
            log = math.log

            def h(gamma):
                total = l0 + gamma * dl
                for a, b, d in terms:
                    base = b + gamma * d
                    if base <= 0.0:
                        return math.inf
                    total += a * log(base)
                return total
            return h

        def h(gamma):
            with np.errstate(invalid="ignore", divide="ignore"):
                val = float(am @ np.log(b0 + gamma * db) + l0 + gamma * dl)
            return val if val == val else math.inf
        return h


class _RelaxObjective:
    """F(w) = q'w - sum_j alpha_j ln((V'w)_j) over the unit simplex."""

    def __init__(self, V, q, alpha):
        self.V = V          # rows are vertices
        self.q = q
        self.alpha = alpha

    def value(self, w):
        return float(self.q @ w - self.alpha @ np.log(w @ self.V))

    def grad(self, w):
        u = w @ self.V
        return self.q - self.V @ (self.alpha / u)

    def along(self, w, direction):
        u0 = w @ self.V
        du = direction @ self.V
        q0 = self.q @ w
        dq = self.q @ direction
        alpha = self.alpha

        def h(gamma):
            return float(q0 + gamma * dq - alpha @ np.log(u0 + gamma * du))
        return h


# -- conditional gradient ------------------------------------------------------

def _line_search(h, gmax, iters):
    """Golden-section search on [0, gmax]; endpoints are checked too."""
    h0 = h(0.0)
    lo, hi = 0.0, gmax
    a = hi - GOLDEN * (hi - lo)
    b = lo + GOLDEN * (hi - lo)
    fa, fb = h(a), h(b)
    for _ in range(iters):
        if fa <= fb:
            hi, b, fb = b, a, fa
            a = hi - GOLDEN * (hi - lo)
            fa = h(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + GOLDEN * (hi - lo)
            fb = h(b)
    gamma, best = (a, fa) if fa <= fb else (b, fb)
    fmax = h(gmax)
    if fmax <= best:
        gamma, best = gmax, fmax
    # optimum closer to 0 than the bracket resolution: backtrack
    step = gamma
    while best >= h0 and step > gmax * 1e-18:
        step *= GOLDEN
        fs = h(step)
        if fs < h0:
            gamma, best = step, fs
            break
    if best >= h0:
        return 0.0, h0
    return gamma, best


def _conditional_gradient(obj, lmo, vertices, weights, tol, max_iter, ls_iters):
    """Pairwise Frank-Wolfe from the convex combination ``weights @ vertices``.

    ``lmo(g)`` returns a minimizer of g'v over the feasible set.  Each step
    moves weight from the worst active vertex to the oracle vertex, which
    avoids the zigzag of plain and away-step updates when the minimizer lies
    inside a face.  Returns (x, f(x), gap(x), iterations, converged).
    """
    active = {v.tobytes(): [v, w] for v, w in zip(vertices, weights)}
    x = np.asarray(weights, dtype=float) @ np.asarray(vertices, dtype=float)
    fx = obj.value(x)
    it = 0
    while True:
        g = obj.grad(x)
        v = lmo(g)
        gap = float(g @ (x - v))
        if gap <= tol:
            return x, fx, max(gap, 0.0), it, True
        if it >= max_iter:
            return x, fx, gap, it, False
        it += 1
        keys = list(active)
        scores = [float(g @ active[k][0]) for k in keys]
        ka = keys[int(np.argmax(scores))]
        va, wa = active[ka]
        key = v.tobytes()
        if key == ka:
            # the oracle vertex is already the worst atom: fall back to a plain step
            d = v - x
            gmax = 1.0
        else:
            d = v - va
            gmax = wa
        gamma, f_new = _line_search(obj.along(x, d), gmax, ls_iters)
        if gamma == 0.0:
            return x, fx, gap, it, False
        if key == ka:
            for entry in active.values():
                entry[1] *= 1.0 - gamma
            active[key][1] += gamma
        else:
            if gamma >= gmax:
                del active[ka]
            else:
                active[ka][1] -= gamma
            if key in active:
                active[key][1] += gamma
            else:
                active[key] = [v, gamma]
        x = x + gamma * d
        fx = f_new


# -- public operations ----------------------------------------------------------

def phi(instance: GlmpInstance, partition: IndexPartition, x, t) -> float:
    """Lifted objective: exact logs on J-, tangent majorants on J+."""
    return _PsiObjective(instance, partition, t).value(np.asarray(x, dtype=float))


def eval_psi(instance: GlmpInstance, partition: IndexPartition, t,
             tol: float = 1e-6, max_iter: int = 5000,
             line_search_iters: int = 30) -> PsiBracket:
    """Bracket psi(t) = min over X of phi(x, t).

    With no negative exponents phi is affine in x and one LP gives the exact
    value.  Otherwise conditional gradient runs until the gap drops to
    ``tol``; hitting ``max_iter`` returns the bracket reached with
    ``converged=False``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    obj = _PsiObjective(instance, partition, t)
    # successive gradients are close, so recent bases answer most calls
    oracle = instance.linear_oracle()

    def lmo(g):
        sol = oracle.minimize(g)
        if sol.status is not LpStatus.OPTIMAL:
            raise SubproblemError(f"linear oracle returned {sol.status.value}")
        return sol.x

    start = lmo(obj.lin)
    if not partition.j_minus:
        val = obj.value(start)
        return PsiBracket(val, val, start, 1, True)
    x, _, gap, it, ok = _conditional_gradient(
        obj, lmo, [start], [1.0], tol, max_iter, line_search_iters)
    upper = obj.value(x)
    return PsiBracket(upper - gap, upper, x, it, ok)


def solve_lb(vertices, psi_lowers, alphas_plus, tol: float = 1e-6,
             max_iter: int = 2000, line_search_iters: int = 30) -> RelaxResult:
    """Certified lower bound of psi over the simplex spanned by ``vertices``.

    Minimizes F(w) = sum_i (psi_i + sum_j alpha_j ln v^i_j) w_i
    - sum_j alpha_j ln(sum_i v^i_j w_i) over the unit simplex, starting from
    the barycenter, and reports F(w) minus the final Frank-Wolfe gap.
    """
    V = np.asarray(vertices, dtype=float)
    k = V.shape[0]
    if V.ndim != 2 or V.shape[1] != k - 1:
        raise ValueError("need p_bar + 1 vertices of dimension p_bar")
    psi_lowers = np.asarray(psi_lowers, dtype=float)
    alpha = np.asarray(alphas_plus, dtype=float)
    if np.any(~(V > 0)):
        raise DomainError("simplex vertices must be strictly positive")
    if np.any(~(alpha > 0)):
        raise ValueError("alphas_plus must be positive")
    q = psi_lowers + np.log(V) @ alpha
    obj = _RelaxObjective(V, q, alpha)
    eye = np.eye(k)

    def lmo(g):
        return eye[int(np.argmin(g))]

    M = np.vstack([V.T, np.ones(k)])
    degenerate = bool(np.linalg.matrix_rank(M) < k)
    w, fw, gap, it, ok = _conditional_gradient(
        obj, lmo, list(eye), np.full(k, 1.0 / k), tol, max_iter,
        line_search_iters)
    w = np.maximum(w, 0.0)
    w = w / w.sum()
    return RelaxResult(fw - gap, w, gap, it, ok, degenerate)
