"""Build a small instance by hand, solve it, and read the result.

Run:  python3 demos/01_first_solve.py
"""
import math

import numpy as np

from glmpbb import GlmpInstance, SolverConfig, objective_h, solve, validate

# %% A product of two affine terms over a clipped square.
# minimize (x1 + 1)(x2 + 1)  subject to  x1 + x2 >= 1,  0 <= x <= 1
A = [[-1, -1], [1, 0], [0, 1], [-1, 0], [0, -1]]
b = [-1, 1, 1, 0, 0]
inst = GlmpInstance.from_terms(A, b, [([1, 0], 1, 1), ([0, 1], 1, 1)], name="square")
print(inst.n, "variables,", inst.m, "rows,", inst.p, "terms")

# %% Check the standing assumptions before anything else.
report = validate(inst)
print("feasible:", report.feasible, " bounded:", report.bounded)
print("term ranges over X:", [(float(lo), float(hi)) for lo, hi in
                              zip(report.term_minimums, report.term_maximums)])

# %% Solve.  epsilon is a gap on ln h, so h is within a factor e**eps.
res = solve(inst, SolverConfig(epsilon=1e-4))
print(res.status.value, "h =", res.h_value, "at x =", res.x_star)
print("iterations:", res.iterations, " psi evaluations:", res.psi_evaluations)
print("certified gap on ln h:", res.gap)

# The objective is a product of concave logs, so a vertex is optimal; the
# three vertices of X give 2, 2 and 4.
for v in ([1, 0], [0, 1], [1, 1]):
    print(v, objective_h(inst, v))

# %% Mixed signs: (x + 1) / (3 - x) over [0, 2].
mixed = GlmpInstance(A=[[1.0], [-1.0]], b=[2, 0], c=[[1.0], [-1.0]],
                     d=[1, 3], alpha=[1, -1])
res = solve(mixed, SolverConfig(epsilon=1e-4))
print(res.status.value, "h =", round(res.h_value, 6), "x =", res.x_star)

# %% Only negative exponents: ln h is convex and one solve is enough.
convex = GlmpInstance(A=[[1.0], [-1.0]], b=[2, 0], c=[[1.0]], d=[1], alpha=[-1])
res = solve(convex)
print(res.status.value, "h =", round(res.h_value, 6), "x =", np.round(res.x_star, 6))
print("expected 1/3 at x = 2:", math.isclose(res.h_value, 1 / 3, rel_tol=1e-6))
