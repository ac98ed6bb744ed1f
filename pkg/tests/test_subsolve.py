import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from glmpbb import compute_t_bounds, partition_terms
from glmpbb.generate import GenSpec, generate
from glmpbb.model import DomainError, objective_nu
from glmpbb.subsolve import eval_psi, lemma1_slack, phi, solve_lb

from _util import interval_instance, sample_feasible, sample_in_simplex

LN2 = math.log(2.0)
LN3 = math.log(3.0)


def test_phi_binding_point():
    inst = interval_instance(1, 1, 1)
    part = partition_terms(inst)
    assert phi(inst, part, [1.0], [0.5]) == pytest.approx(LN2)
    assert phi(inst, part, [1.0], [1.0]) == pytest.approx(1.0)


def test_phi_mixed(inst_b):
    part = partition_terms(inst_b)
    assert phi(inst_b, part, [0.0], [1.0]) == pytest.approx(-LN3)


def test_phi_domain(inst_b):
    part = partition_terms(inst_b)
    with pytest.raises(DomainError):
        phi(inst_b, part, [3.5], [1.0])
    with pytest.raises(DomainError):
        phi(inst_b, part, [0.0], [0.0])


@pytest.mark.parametrize("a, expected", [
    (1.0, 0.0), (math.e, 1 / math.e), (0.5, math.log(0.5) + 1.0)])
def test_lemma1_values(a, expected):
    assert lemma1_slack(a) == pytest.approx(expected, abs=1e-12)


def test_lemma1_rejects_nonpositive():
    with pytest.raises(ValueError):
        lemma1_slack(0.0)


@given(st.floats(1e-6, 1e6))
def test_lemma1_nonnegative(a):
    assert lemma1_slack(a) >= -1e-12


def test_psi_affine_case():
    inst = interval_instance(1, 1, 1)
    br = eval_psi(inst, partition_terms(inst), [1.0])
    assert br.lower == br.upper == pytest.approx(0.0)
    assert br.x_arg == pytest.approx([0.0])


def test_psi_mixed_matches_grid_scan(inst_b):
    xs = np.linspace(0.0, 2.0, 200001)
    scan = (-np.log(3 - xs) + xs + 1 - 0 - 1).min()
    br = eval_psi(inst_b, partition_terms(inst_b), [1.0], tol=1e-9)
    assert br.lower <= scan + 1e-9
    assert br.upper == pytest.approx(scan, abs=1e-8)
    assert scan == pytest.approx(-LN3, abs=1e-12)


def test_psi_interior_minimum_bracket():
    # (x+1)^1 (4-x)^-2 on [0, 3] with t = 0.5: phi = 0.5 (x+1) - ln 0.5 - 1 - 2 ln(4-x)
    inst = interval_instance(1, 1, 1, 0.0, 3.0)
    inst = type(inst)(A=inst.A, b=inst.b, c=[[1.0], [-1.0]], d=[1, 4], alpha=[1, -2])
    xs = np.linspace(0, 3, 300001)
    scan = (0.5 * (xs + 1) - math.log(0.5) - 1 - 2 * np.log(4 - xs)).min()
    br = eval_psi(inst, partition_terms(inst), [0.5], tol=1e-10)
    assert br.converged
    assert br.lower - 1e-9 <= scan <= br.upper + 1e-9
    assert br.upper - br.lower <= 1e-10


def test_psi_upper_below_any_feasible_point(rng):
    inst = generate(GenSpec("P3", 6, 5, p=3, p_bar_target=2, seed=4))
    part = partition_terms(inst)
    for x in sample_feasible(inst, 20, rng):
        t = 1.0 / inst.bases(x)[list(part.j_plus)]
        br = eval_psi(inst, part, t, tol=1e-8)
        assert br.lower <= br.upper
        assert br.upper <= phi(inst, part, x, t) + 1e-12
        assert br.upper == phi(inst, part, br.x_arg, t)


def test_psi_iteration_cap_flags_bracket():
    inst = generate(GenSpec("P3", 8, 6, p=4, p_bar_target=1, seed=2))
    part = partition_terms(inst)
    t = compute_t_bounds(inst, part).t_upper
    br = eval_psi(inst, part, t, tol=1e-14, max_iter=2)
    assert br.subsolver_iterations <= 2
    if not br.converged:
        assert br.lower <= br.upper


def test_underestimator_inequality(rng):
    for seed in range(3):
        inst = generate(GenSpec("P3", 6, 5, p=3, p_bar_target=3, seed=seed))
        plus = list(partition_terms(inst).j_plus)
        a = inst.alpha[plus]
        for x in sample_feasible(inst, 30, rng):
            base = inst.bases(x)[plus]
            lhs = a @ np.log(base)
            for t in rng.uniform(0.01, 10, size=(20, len(plus))):
                assert lhs <= a @ (t * base - np.log(t) - 1) + 1e-10
            tb = 1.0 / base
            assert abs(lhs - a @ (tb * base - np.log(tb) - 1)) <= 1e-9


def test_lb_one_dimensional_against_scan():
    w2 = np.arange(0.0, 1.0 + 5e-7, 1e-6)
    F = w2 * LN2 - np.log(1 + w2)
    k = int(np.argmin(F))
    res = solve_lb([[1.0], [2.0]], [0.0, 0.0], [1.0], tol=1e-10)
    assert res.lb_value <= F[k] + 1e-12
    assert res.lb_value == pytest.approx(F[k], abs=1e-9)
    assert res.w_arg[1] == pytest.approx(w2[k], abs=2e-6)
    assert F[k] == pytest.approx(-0.0596601, abs=1e-7)


def test_lb_degenerate_collapse():
    res = solve_lb([[2.0, 3.0]] * 3, [5.0] * 3, [1.0, 2.0])
    assert res.degenerate
    assert res.lb_value == pytest.approx(5.0)


def test_lb_linear_domination():
    V = [[1.0, 1.0], [2.0, 1.0], [1.0, 2.0]]
    res = solve_lb(V, [0.0, -1e4, 0.0], [1.0, 1.0])
    assert res.w_arg[1] == pytest.approx(1.0, abs=1e-9)
    q1 = -1e4 + math.log(2.0)
    assert res.lb_value <= q1 - math.log(2.0) + 1e-9


def test_lb_result_invariants(rng):
    for _ in range(50):
        k = int(rng.integers(1, 5))
        V = rng.uniform(0.2, 3.0, size=(k + 1, k))
        res = solve_lb(V, rng.normal(size=k + 1), rng.uniform(0.1, 2, k), tol=1e-7)
        assert np.all(res.w_arg >= 0)
        assert res.w_arg.sum() == pytest.approx(1.0, abs=1e-12)
        assert res.fw_gap <= 1e-7


def test_lb_below_psi_on_simplex(rng):
    for seed in range(6):
        inst = generate(GenSpec("P3", 5, 4, p=3, p_bar_target=1 + seed % 3, seed=seed))
        part = partition_terms(inst)
        bounds = compute_t_bounds(inst, part)
        from glmpbb.simplex_geom import initial_simplex
        root = initial_simplex(bounds)
        lowers = [eval_psi(inst, part, v, tol=1e-8).lower for v in root.vertices]
        lb = solve_lb(root.vertices, lowers, inst.alpha[list(part.j_plus)],
                      tol=1e-8).lb_value
        for t in sample_in_simplex(root.vertices, 25, rng):
            assert lb <= eval_psi(inst, part, t, tol=1e-8).upper + 1e-6
