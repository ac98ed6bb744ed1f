"""The lifted objective phi(x, t) and the two bounding engines.

For a positive exponent, ln y <= t y - ln t - 1 for every t > 0, with
equality at t = 1/y.  Replacing each positive-exponent log this way gives
phi(x, t); its minimum over X is psi(t), and min psi = min ln h.

Run:  python3 demos/02_lifted_objective.py
"""
import numpy as np

from glmpbb import (compute_t_bounds, eval_psi, initial_simplex, lemma1_slack,
                    objective_nu, partition_terms, phi, refit_t, solve_lb)
from glmpbb.generate import GenSpec, generate

# %% The scalar inequality behind the lifting: ln a + 1/a - 1 >= 0.
a = np.geomspace(1e-3, 1e3, 7)
print(np.round(lemma1_slack(a), 4))

# %% A random mixed-sign instance: two positive and two negative exponents.
inst = generate(GenSpec("P3", m=6, n=5, p=4, p_bar_target=2, seed=3))
part = partition_terms(inst)
print("alpha:", np.round(inst.alpha, 3), " J+ =", part.j_plus, " J- =", part.j_minus)

# %% phi touches ln h at the binding t and lies above it elsewhere.
x = inst.minimize_linear(np.ones(inst.n)).x
t_bind = refit_t(inst, part, x)
print("ln h(x)        ", objective_nu(inst, x))
print("phi(x, t_bind) ", phi(inst, part, x, t_bind))
print("phi(x, 2 t)    ", phi(inst, part, x, 2 * t_bind))

# %% psi(t) comes back as a certified bracket [lower, upper].
br = eval_psi(inst, part, t_bind, tol=1e-8)
print("psi bracket:", br.lower, br.upper, " iterations:", br.subsolver_iterations)
print("upper <= phi(x, t_bind):", br.upper <= phi(inst, part, x, t_bind))

# %% Over a whole simplex of t values, solve_lb gives one lower bound.
root = initial_simplex(compute_t_bounds(inst, part))
lowers = [eval_psi(inst, part, v, tol=1e-8).lower for v in root.vertices]
relax = solve_lb(root.vertices, lowers, inst.alpha[list(part.j_plus)], tol=1e-8)
print("LB over the first simplex:", relax.lb_value, " weights:", np.round(relax.w_arg, 3))

rng = np.random.default_rng(0)
samples = rng.dirichlet(np.ones(3), size=200) @ root.matrix()
smallest = min(eval_psi(inst, part, t, tol=1e-8).upper for t in samples)
print("smallest sampled psi:", smallest, " LB below it:", relax.lb_value <= smallest)
