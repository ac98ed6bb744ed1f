"""The built-in simplex method that every other part leans on.

Run:  python3 demos/08_linear_programs.py
"""
import numpy as np

from glmpbb.linprog import LinearOracle, LpProblem, solve_lp

# %% max x + y on the unit square's upper-left triangle.
sol = solve_lp(LpProblem(g=[-1, -1], A=[[1, 1]], b=[1], lower=[0, 0]))
print(sol.status.value, sol.x, sol.value)

# %% Infeasible and unbounded come back as statuses, not exceptions.
print(solve_lp(LpProblem(g=[1], A=[[1], [-1]], b=[-1, 0])).status.value)
print(solve_lp(LpProblem(g=[-1], A=[[-1]], b=[0])).status.value)

# %% Beale's example cycles under plain Dantzig pricing; the switch to
# Bland's rule after a run of degenerate pivots gets it unstuck.
A = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
sol = solve_lp(LpProblem(g=[-0.75, 150, -0.02, 6], A=A, b=[0, 0, 1], lower=[0] * 4))
print("Beale:", sol.value, "in", sol.iterations, "pivots")

# %% Many costs over one region: the oracle reuses recent optimal bases.
rng = np.random.default_rng(0)
A = rng.uniform(-1, 1, size=(15, 6))
oracle = LinearOracle(A, A.sum(axis=1) + 1, lower=np.zeros(6))
g = rng.normal(size=6)
for _ in range(200):
    g = g + 0.01 * rng.normal(size=6)
    oracle.minimize(g)
print("answered from cache:", oracle.hits, " fresh solves:", oracle.solves)
