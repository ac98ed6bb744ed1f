"""Simplices in t-space, from the first one down through repeated bisection.

Run:  python3 demos/03_simplices.py
"""
import math

import numpy as np

from glmpbb.simplex_geom import (BoundsBox, barycentric, bisect, diameter,
                                 initial_simplex, longest_edge, volume)

# %% The first simplex has its corner at t_lower and legs p (t_upper - t_lower).
bounds = BoundsBox([0.5, 0.25], [1.0, 1.0])
root = initial_simplex(bounds)
print(np.array(root.vertices))

# Every corner of the box sits inside it.
for corner in bounds.corners():
    print(corner, np.round(barycentric(root, corner), 3))

# %% Volume by Cayley-Menger against the closed form p**p prod(width) / p!.
p = bounds.dim
closed = p ** p * np.prod(bounds.t_upper - bounds.t_lower) / math.factorial(p)
print("volume:", volume(root), " closed form:", closed)

# %% Bisect at the midpoint of the longest edge.
i, j, length = longest_edge(root)
c1, c2, _, _ = bisect(root, (1, 2))
print("split edge", (i, j), "of length", round(length, 4))
print("child 1:", np.array(c1.vertices).tolist())
print("child 2:", np.array(c2.vertices).tolist())
print("volumes add up:", volume(c1) + volume(c2), "=", volume(root))

# The untouched vertices are the very same arrays, so any cached psi value
# at them carries over to the children for free.
print("shared vertex objects:", c1.vertices[0] is root.vertices[0])

# %% Following one branch, the diameter keeps shrinking.
node = root
for step in range(9):
    node = bisect(node)[step % 2]
    print(step, round(diameter(node), 5))
