"""The three random families and a small benchmark table.

Run:  python3 demos/05_random_families.py
"""
import time

import numpy as np

from glmpbb import SolverConfig, partition_terms, solve, validate
from glmpbb.generate import GenSpec, generate

# %% Same spec, same seed, same instance.
a = generate(GenSpec("P1", m=10, n=20, seed=1))
b = generate(GenSpec("P1", m=10, n=20, seed=1))
print("identical:", all(np.array_equal(getattr(a, k), getattr(b, k))
                        for k in ("A", "b", "c", "d", "alpha")))

# %% P3 lets us pick how many exponents are positive.
for target in (1, 2, 3):
    inst = generate(GenSpec("P3", m=10, n=20, p=3, p_bar_target=target, seed=7))
    print(target, partition_terms(inst).p_bar, np.round(inst.alpha, 3))

# %% Every draw passes validation; P2 has d = 0 so positivity is the hard part.
inst = generate(GenSpec("P2", m=10, n=20, p=2, seed=4))
rep = validate(inst)
print("P2 ok:", rep.ok, " smallest term value:", rep.term_minimums.min())

# %% Averages over a few seeds, in the layout of a results table.
print(f"{'scheme':6s} {'p':>2s} {'Avg.Iter':>9s} {'Avg.Time':>9s} {'Opt.val':>10s}")
for scheme, p in (("P1", 2), ("P2", 2), ("P3", 3)):
    iters, times, vals = [], [], []
    for seed in range(5):
        inst = generate(GenSpec(scheme, m=10, n=20, p=p, seed=seed))
        t0 = time.perf_counter()
        res = solve(inst, SolverConfig(epsilon=1e-3))
        times.append(time.perf_counter() - t0)
        iters.append(res.iterations)
        vals.append(res.h_value)
    print(f"{scheme:6s} {p:2d} {np.mean(iters):9.1f} {np.mean(times):9.3f} {np.mean(vals):10.5f}")
