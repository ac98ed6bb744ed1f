import math

import numpy as np
import pytest

from glmpbb import GlmpInstance, SolverConfig, compute_t_bounds, partition_terms, solve
from glmpbb.generate import GenSpec, generate
from glmpbb.oracle import (compositions, enumerate_vertices, grid_error_bound,
                           grid_min_psi, vertex_min_h)
from glmpbb.subsolve import eval_psi


def test_compositions():
    C = compositions(3, 3)
    assert C.shape == (math.comb(5, 2), 3)
    assert np.all(C.sum(axis=1) == 3)
    assert len({tuple(r) for r in C}) == len(C)
    assert compositions(1, 2).tolist() == [[0, 1], [1, 0]]


def test_grid_instance_a(inst_a):
    value, t = grid_min_psi(inst_a, 200)
    assert value == pytest.approx(math.log(2), abs=1e-6)


def test_grid_instance_b(inst_b):
    value, t = grid_min_psi(inst_b, 1000)
    assert value == pytest.approx(-math.log(3), abs=1e-6)


def test_grid_resolution_one_is_vertex_min(inst_a):
    part = partition_terms(inst_a)
    from glmpbb.simplex_geom import initial_simplex
    root = initial_simplex(compute_t_bounds(inst_a, part))
    expect = min(eval_psi(inst_a, part, v, tol=1e-8).upper for v in root.vertices)
    assert grid_min_psi(inst_a, 1)[0] == pytest.approx(expect, abs=1e-12)


def test_fast_path_matches_plain():
    inst = generate(GenSpec("P1", 6, 5, seed=3))
    fast = grid_min_psi(inst, 40, fast=True)[0]
    slow = grid_min_psi(inst, 40, fast=False)[0]
    assert fast == pytest.approx(slow, abs=1e-7)


def test_grid_rejects_large_dimension():
    inst = generate(GenSpec("P3", 4, 4, p=4, p_bar_target=4, seed=0))
    with pytest.raises(ValueError):
        grid_min_psi(inst, 3)


def test_vertex_examples(inst_a):
    h, x = vertex_min_h(inst_a)
    assert h == pytest.approx(2.0)
    assert x.tolist() in ([1.0, 0.0], [0.0, 1.0])
    box = GlmpInstance.from_terms(np.vstack([np.eye(3), -np.eye(3)]), [1, 1, 1, 0, 0, 0],
                                  [([0.3, 0.5, 0.1], 1, 1), ([1, 0, 0.2], 1, 2)])
    h, x = vertex_min_h(box)
    assert h == 1.0 and x.tolist() == [0, 0, 0]


def test_vertex_errors(inst_b):
    with pytest.raises(ValueError):
        vertex_min_h(inst_b)
    empty = GlmpInstance(A=[[1.0], [-1.0]], b=[-1, 0], c=[[1.0]], d=[1], alpha=[1])
    with pytest.raises(ValueError):
        vertex_min_h(empty)


def test_enumerate_square():
    V = enumerate_vertices(np.vstack([np.eye(2), -np.eye(2)]), [1, 1, 0, 0])
    assert sorted(map(tuple, V)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_oracles_agree_on_positive_instances():
    for seed in range(4):
        inst = generate(GenSpec("P1", 5, 4, seed=seed))
        part = partition_terms(inst)
        bounds = compute_t_bounds(inst, part)
        err = grid_error_bound(bounds, inst.alpha, 150)
        g, _ = grid_min_psi(inst, 150)
        h, _ = vertex_min_h(inst)
        assert math.log(h) <= g + 1e-7
        assert g - math.log(h) <= err + 1e-7


def test_solver_against_oracle_small():
    # 20 seeded mixed-sign instances, p_bar <= 2 and n <= 6
    eps = 1e-3
    for seed in range(20):
        p_bar = 1 + seed % 2
        inst = generate(GenSpec("P3", 5, 5, p=3, p_bar_target=p_bar, seed=seed))
        part = partition_terms(inst)
        res = solve(inst, SolverConfig(epsilon=eps))
        resolution = 200 if p_bar == 1 else 24
        g, _ = grid_min_psi(inst, resolution, tol=1e-7)
        err = grid_error_bound(compute_t_bounds(inst, part),
                               inst.alpha[list(part.j_plus)], resolution)
        # the grid value is an upper estimate of min psi, which equals min nu
        assert res.ub <= g + eps + 1e-7
        assert g <= res.ub + err + 1e-7
