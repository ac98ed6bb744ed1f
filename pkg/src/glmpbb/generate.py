"""Seeded random instances in three families.

``P1``: two terms (c_j'x + 1), x >= 0.
``P2``: p terms c_j'x, 0 <= x <= 1.
``P3``: p terms (c_j'x + d_j) ** alpha_j with mixed signs, x >= 0.

In all three, A is uniform on [-1, 1] and b = A @ 1 + 2 mu with mu uniform on
[0, 1], so x = 1 is always feasible.  Draws that fail :func:`validate`
(unbounded X, a term touching zero) are thrown away and redrawn from the
same stream.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linprog import LpStatus
from .model import DEFAULT_DELTA_POS, GlmpInstance, validate

SCHEMES = ("P1", "P2", "P3")


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenSpec:
    scheme: str
    m: int
    n: int
    p: int = 2
    p_bar_target: Optional[int] = None
    seed: int = 0
    max_retries: int = 1000

    def __post_init__(self):
        scheme = self.scheme.upper()
        object.__setattr__(self, "scheme", scheme)
        if scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if scheme == "P1" and self.p != 2:
            raise ValueError("P1 has exactly two terms")
        if self.p < 1 or self.m < 0 or self.n < 1:
            raise ValueError("need p >= 1, m >= 0, n >= 1")
        if scheme == "P3":
            target = self.p if self.p_bar_target is None else self.p_bar_target
            if not 1 <= target <= self.p:
                raise ValueError("p_bar_target must lie in [1, p]")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _draw(spec: GenSpec, rng: np.random.Generator, name: str) -> GlmpInstance:
    m, n, p = spec.m, spec.n, spec.p
    A = rng.uniform(-1.0, 1.0, size=(m, n))
    mu = rng.uniform(0.0, 1.0, size=m)
    b = A.sum(axis=1) + 2.0 * mu
    c = rng.uniform(0.0, 1.0, size=(p, n))
    eye = np.eye(n)
    if spec.scheme == "P1":
        d = np.ones(p)
        alpha = np.ones(p)
        rows, rhs = [-eye], [np.zeros(n)]
    elif spec.scheme == "P2":
        d = np.zeros(p)
        alpha = np.ones(p)
        rows, rhs = [-eye, eye], [np.zeros(n), np.ones(n)]
    else:
        d = rng.uniform(0.0, 1.0, size=p)
        magnitude = 1.0 - rng.uniform(0.0, 1.0, size=p)   # (0, 1]
        target = p if spec.p_bar_target is None else spec.p_bar_target
        positive = np.zeros(p, dtype=bool)
        positive[rng.permutation(p)[:target]] = True
        alpha = np.where(positive, magnitude, -magnitude)
        rows, rhs = [-eye], [np.zeros(n)]
    A = np.vstack([A] + rows)
    b = np.concatenate([b] + rhs)
    return GlmpInstance(A=A, b=b, c=c, d=d, alpha=alpha, name=name)


def generate(spec: GenSpec, delta_pos: float = DEFAULT_DELTA_POS) -> GlmpInstance:
    """Draw the first valid instance of ``spec`` from its seeded stream.

    The stream is numpy's PCG64 seeded with ``spec.seed``, so the same spec
    gives the same instance on every platform.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    name = f"{spec.scheme}-m{spec.m}-n{spec.n}-p{spec.p}-s{spec.seed}"
    last = []
    for _ in range(spec.max_retries):
        instance = _draw(spec, rng, name)
        if spec.scheme != "P2":
            # x >= 0, so X is bounded iff sum(x) is; one LP screens most rejects
            if instance.minimize_linear(-np.ones(spec.n)).status is LpStatus.UNBOUNDED:
                last = ["feasible region is unbounded"]
                continue
        report = validate(instance, delta_pos)
        if report.ok:
            return instance
        last = report.violations
    raise GenerationError(
        f"no valid {spec.scheme} draw in {spec.max_retries} tries; "
        f"last draw: {'; '.join(last)}")
