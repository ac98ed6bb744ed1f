"""Shared instances and samplers for the test suite."""
import numpy as np

from glmpbb import GlmpInstance


def instance_a():
    """min (x1+1)(x2+1)  s.t.  x1 + x2 >= 1, 0 <= x <= 1."""
    A = [[-1, -1], [1, 0], [0, 1], [-1, 0], [0, -1]]
    b = [-1, 1, 1, 0, 0]
    return GlmpInstance.from_terms(A, b, [([1, 0], 1, 1), ([0, 1], 1, 1)],
                                   name="A")


def instance_b():
    """min (x+1)(3-x)^-1 over [0, 2]."""
    return GlmpInstance(A=[[1.0], [-1.0]], b=[2, 0], c=[[1.0], [-1.0]],
                        d=[1, 3], alpha=[1, -1], name="B")


def instance_negative():
    """min (x+1)^-1 over [0, 2]."""
    return GlmpInstance(A=[[1.0], [-1.0]], b=[2, 0], c=[[1.0]], d=[1],
                        alpha=[-1], name="neg")


def interval_instance(c, d, alpha, lo=0.0, hi=2.0):
    return GlmpInstance(A=[[1.0], [-1.0]], b=[hi, -lo], c=[[float(c)]],
                        d=[d], alpha=[alpha])


def sample_feasible(instance, k, rng, n_vertices=8):
    """Random convex combinations of LP vertices of X."""
    verts = []
    for _ in range(n_vertices):
        sol = instance.minimize_linear(rng.normal(size=instance.n))
        verts.append(sol.x)
    V = np.array(verts)
    W = rng.dirichlet(np.ones(len(verts)), size=k)
    return W @ V


def sample_in_simplex(vertices, k, rng):
    V = np.asarray(vertices)
    return rng.dirichlet(np.ones(V.shape[0]), size=k) @ V


def assert_monotone_trace(result, eps):
    ubs = np.array([r.ub for r in result.trace])
    lbs = np.array([r.lb for r in result.trace])
    assert np.all(np.diff(ubs) <= 0.0)
    assert np.all(np.diff(lbs) >= 0.0)
    assert np.all(lbs <= ubs)
    if result.status.value == "EpsOptimal":
        assert result.ub - result.lb <= eps
