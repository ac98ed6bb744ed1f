"""Watch the branch and bound loop one iteration at a time.

Run:  python3 demos/04_branch_and_bound.py
"""
from glmpbb import SolverConfig
from glmpbb.bb import OuterSpaceBB
from glmpbb.generate import GenSpec, generate

inst = generate(GenSpec("P3", m=8, n=6, p=3, p_bar_target=2, seed=5))
bb = OuterSpaceBB(inst, SolverConfig(epsilon=1e-4))

# %% Step 0 prices the vertices of the first simplex and bounds it.
root = bb.initialize()
print("t bounds:", bb.bounds.t_lower, bb.bounds.t_upper)
print("root LB:", root.lb, " incumbent:", bb.ub)

# %% Each step pops the lowest-LB simplex, bisects it and prices one new vertex.
while bb.step():
    rec = bb.trace[-1]
    if rec.k % 5 == 0:
        print(f"k={rec.k:3d}  lb={rec.lb:.6f}  ub={rec.ub:.6f}  "
              f"open={rec.active_nodes:3d}  d(S)={rec.node_diameter:.4f}")

res = bb.result()
print(res.status.value, "after", res.iterations, "iterations")
print("h =", res.h_value, " gap =", res.gap)

# %% One new psi evaluation per iteration, on top of the p + 1 at the root.
print(res.psi_evaluations, "==", bb.partition.p_bar + 1 + res.iterations)

# %% The worst case from the volume argument, for comparison.
print("worst-case iteration bound:", res.theorem5_bound)
