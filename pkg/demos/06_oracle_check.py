"""Cross-check the solver against brute force.

The grid oracle scans psi over a barycentric grid of the first simplex; the
vertex oracle enumerates the vertices of X (valid when all exponents are
positive, since ln h is then concave).

Run:  python3 demos/06_oracle_check.py
"""
import math

from glmpbb import SolverConfig, compute_t_bounds, partition_terms, solve
from glmpbb.generate import GenSpec, generate
from glmpbb.oracle import grid_error_bound, grid_min_psi, vertex_min_h

eps = 1e-3
for seed in range(5):
    inst = generate(GenSpec("P1", m=6, n=4, seed=seed))
    part = partition_terms(inst)
    res = solve(inst, SolverConfig(epsilon=eps))
    grid, _ = grid_min_psi(inst, 300)
    err = grid_error_bound(compute_t_bounds(inst, part), inst.alpha, 300)
    h_vertex, _ = vertex_min_h(inst)
    print(f"seed {seed}:  solver {res.h_value:.6f}  grid {math.exp(grid):.6f}  "
          f"vertices {h_vertex:.6f}  (grid error <= {err:.3g} on ln h)")

# %% Mixed signs rule out vertex enumeration, but the grid still applies.
inst = generate(GenSpec("P3", m=5, n=5, p=3, p_bar_target=1, seed=2))
res = solve(inst, SolverConfig(epsilon=eps))
grid, t = grid_min_psi(inst, 200, tol=1e-7)
print("mixed:", res.ub, grid, "at t =", t)
