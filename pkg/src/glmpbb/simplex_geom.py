"""Simplices in the outer (t) space and the operations the search needs on them."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np


class DegenerateSimplexError(ValueError):
    pass


@dataclass(frozen=True)
class BoundsBox:
    t_lower: np.ndarray
    t_upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.t_lower, dtype=float).ravel()
        up = np.asarray(self.t_upper, dtype=float).ravel()
        if lo.shape != up.shape:
            raise ValueError("t_lower and t_upper differ in length")
        if np.any(~(lo > 0)) or np.any(lo > up):
            raise ValueError("bounds must satisfy 0 < t_lower <= t_upper")
        object.__setattr__(self, "t_lower", lo)
        object.__setattr__(self, "t_upper", up)

    @property
    def dim(self) -> int:
        return self.t_lower.size

    def corners(self) -> np.ndarray:
        """All 2**dim corners of the box, one per row."""
        k = self.dim
        bits = (np.arange(2 ** k)[:, None] >> np.arange(k)) & 1
        return np.where(bits == 1, self.t_upper, self.t_lower)


@dataclass(frozen=True, eq=False)
class SimplexNode:
    """A p_bar-simplex with per-vertex psi brackets.

    ``vertices`` and ``vertex_psi`` are tuples; bisection hands the untouched
    entries to both children as the very same objects.
    """

    id: int
    depth: int
    vertices: tuple
    vertex_psi: tuple = None
    lb: float = float("nan")
    parent_id: Optional[int] = None

    def __post_init__(self):
        if self.vertex_psi is None:
            object.__setattr__(self, "vertex_psi", (None,) * len(self.vertices))
        if len(self.vertex_psi) != len(self.vertices):
            raise ValueError("one psi slot per vertex")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def matrix(self) -> np.ndarray:
        return np.array(self.vertices)

    def with_psi(self, index, bracket) -> "SimplexNode":
        psi = list(self.vertex_psi)
        psi[index] = bracket
        return replace(self, vertex_psi=tuple(psi))


def initial_simplex(bounds: BoundsBox, node_id: int = 0) -> SimplexNode:
    """Corner simplex at t_lower whose legs have length p_bar (t_upper - t_lower)."""
    k = bounds.dim
    if k == 0:
        raise ValueError("no positive exponents: nothing to branch on")
    lo = bounds.t_lower
    verts = [lo.copy()]
    for j in range(k):
        v = lo.copy()
        v[j] = lo[j] + k * (bounds.t_upper[j] - lo[j])
        verts.append(v)
    for v in verts:
        v.setflags(write=False)
    return SimplexNode(id=node_id, depth=0, vertices=tuple(verts))


def longest_edge(node: SimplexNode) -> Tuple[int, int, float]:
    """(i, j, length) of the longest edge, first in lexicographic (i, j) order."""
    V = node.matrix()
    k = V.shape[0]
    if k < 2:
        raise ValueError("need at least two vertices")
    best = (0, 1, -1.0)
    for i in range(k - 1):
        lengths = np.linalg.norm(V[i + 1:] - V[i], axis=1)
        j = int(np.argmax(lengths))
        if lengths[j] > best[2]:
            best = (i, i + 1 + j, float(lengths[j]))
    return best


def diameter(node: SimplexNode) -> float:
    return longest_edge(node)[2]


def bisect(node: SimplexNode, child_ids: Tuple[int, int] = (1, 2)):
    """Split at the midpoint of the longest edge {v_i, v_j}.

    The first child swaps v_j for the midpoint and the second swaps v_i;
    the midpoint's psi slot is left empty in both.
    Returns (child1, child2, index_i, index_j).
    """
    i, j, length = longest_edge(node)
    if length <= 0.0:
        raise DegenerateSimplexError("longest edge has zero length")
    eta = 0.5 * (node.vertices[i] + node.vertices[j])
    eta.setflags(write=False)
    children = []
    for cid, slot in zip(child_ids, (j, i)):
        verts = list(node.vertices)
        psi = list(node.vertex_psi)
        verts[slot] = eta
        psi[slot] = None
        children.append(SimplexNode(id=cid, depth=node.depth + 1,
                                    vertices=tuple(verts), vertex_psi=tuple(psi),
                                    parent_id=node.id))
    return children[0], children[1], i, j


def barycentric(node: SimplexNode, t) -> np.ndarray:
    """Weights w on the unit simplex's affine hull with sum_i w_i v^i = t."""
    V = node.matrix()
    k = V.shape[0]
    M = np.vstack([V.T, np.ones(k)])
    rhs = np.append(np.asarray(t, dtype=float), 1.0)
    if np.linalg.cond(M) > 1e12:
        raise DegenerateSimplexError("vertices are affinely dependent")
    return np.linalg.solve(M, rhs)


def contains(node: SimplexNode, t, tol: float = 1e-10) -> bool:
    return bool(np.all(barycentric(node, t) >= -tol))


def volume(node_or_vertices) -> float:
    """Cayley-Menger volume of a simplex; flat simplices give 0."""
    if isinstance(node_or_vertices, SimplexNode):
        V = node_or_vertices.matrix()
    else:
        V = np.asarray(node_or_vertices, dtype=float)
    k = V.shape[0] - 1
    if k == 0:
        return 1.0
    D = np.sum((V[:, None, :] - V[None, :, :]) ** 2, axis=-1)
    CM = np.ones((k + 2, k + 2))
    CM[0, 0] = 0.0
    CM[1:, 1:] = D
    # scale the squared distances to O(1) so the determinant stays well sized
    scale = D.max()
    if scale == 0.0:
        return 0.0
    CM[1:, 1:] /= scale
    vol2 = ((-1) ** (k + 1) * np.linalg.det(CM)
            / (2.0 ** k * math.factorial(k) ** 2))
    if vol2 < 0.0:
        if vol2 < -1e-12:
            raise ArithmeticError(f"Cayley-Menger determinant has wrong sign ({vol2:.3g})")
        return 0.0
    return float(math.sqrt(vol2) * scale ** (k / 2.0))
