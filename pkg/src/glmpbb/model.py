"""Problem data for generalized linear multiplicative programs.

An instance asks for ``min prod_j (c_j'x + d_j) ** alpha_j`` over the polytope
``{x : A x <= b}``.  This module holds the data, the exponent sign split, the
assumption checks and the two objective evaluations (product and log-sum).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, NamedTuple, Optional

import numpy as np

from .linprog import LinearOracle, LpProblem, LpSolution, LpStatus, solve_lp

DEFAULT_DELTA_POS = 1e-9


class DomainError(ValueError):
    """A log or power argument that should be positive is not."""


class SchemaError(ValueError):
    """Malformed instance JSON."""


class Term(NamedTuple):
    c: np.ndarray
    d: float
    alpha: float


@dataclass(frozen=True, eq=False)
class GlmpInstance:
    """Rows of ``c`` are the term vectors c_j; ``d`` and ``alpha`` are p-vectors."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    alpha: np.ndarray
    name: str = "glmp"

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).ravel()
        c = np.atleast_2d(np.asarray(self.c, dtype=float))
        d = np.asarray(self.d, dtype=float).ravel()
        alpha = np.asarray(self.alpha, dtype=float).ravel()
        if A.shape[0] != b.size:
            raise ValueError(f"A has {A.shape[0]} rows, b has {b.size}")
        if c.shape[0] < 1:
            raise ValueError("at least one term is required")
        if c.shape[1] != A.shape[1]:
            raise ValueError(f"term vectors have length {c.shape[1]}, "
                             f"expected n={A.shape[1]}")
        if not (d.size == alpha.size == c.shape[0]):
            raise ValueError("c, d and alpha disagree on the term count")
        for key, val in dict(A=A, b=b, c=c, d=d, alpha=alpha).items():
            val.setflags(write=False)
            object.__setattr__(self, key, val)

    @classmethod
    def from_terms(cls, A, b, terms, name="glmp"):
        terms = [Term(*t) if not isinstance(t, Term) else t for t in terms]
        return cls(A=A, b=b,
                   c=np.array([np.atleast_1d(t.c) for t in terms], dtype=float),
                   d=[t.d for t in terms], alpha=[t.alpha for t in terms],
                   name=name)

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def p(self) -> int:
        return self.alpha.size

    @property
    def terms(self) -> List[Term]:
        return [Term(self.c[j], float(self.d[j]), float(self.alpha[j]))
                for j in range(self.p)]

    def bases(self, x) -> np.ndarray:
        """All affine terms c_j'x + d_j at ``x``."""
        return self.c @ np.asarray(x, dtype=float) + self.d

    @cached_property
    def lp_region(self):
        """X rewritten as (A', b', lower, upper) with one-variable rows as bounds.

        Keeps the LP small when X carries sign or box constraints.
        """
        A, b = self.A, self.b
        n = self.n
        lower = np.full(n, -np.inf)
        upper = np.full(n, np.inf)
        nnz = np.count_nonzero(A, axis=1)
        general = nnz != 1
        for i in np.flatnonzero(~general):
            j = int(np.flatnonzero(A[i])[0])
            bound = b[i] / A[i, j]
            if A[i, j] > 0:
                upper[j] = min(upper[j], bound)
            else:
                lower[j] = max(lower[j], bound)
        if np.any(lower > upper):
            # let the LP report the infeasibility from the raw rows
            return A, b, None, None
        return (A[general], b[general],
                lower if np.isfinite(lower).any() else None,
                upper if np.isfinite(upper).any() else None)

    def linear_oracle(self) -> LinearOracle:
        """A fresh cached LP oracle over X (see :class:`LinearOracle`)."""
        A, b, lo, up = self.lp_region
        return LinearOracle(A, b, lo, up)

    def minimize_linear(self, g, basis=None) -> LpSolution:
        """Minimize g'x over X, optionally warm-started from an earlier basis."""
        A, b, lo, up = self.lp_region
        return solve_lp(LpProblem(g, A, b, lo, up), basis=basis)

    # -- JSON ---------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name, "n": self.n, "m": self.m,
            "A": self.A.tolist(), "b": self.b.tolist(),
            "terms": [{"c": t.c.tolist(), "d": t.d, "alpha": t.alpha}
                      for t in self.terms],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GlmpInstance":
        if not isinstance(data, dict):
            raise SchemaError("instance must be a JSON object")
        for key in ("n", "m", "A", "b", "terms"):
            if key not in data:
                raise SchemaError(f"missing field '{key}'")
        n, m = data["n"], data["m"]
        if not isinstance(n, int) or not isinstance(m, int) or n < 1 or m < 0:
            raise SchemaError("fields 'n' and 'm' must be a positive and a "
                              "nonnegative integer")
        A = data["A"]
        if len(A) != m or any(len(row) != n for row in A):
            raise SchemaError(f"field 'A' must be {m}x{n}")
        if len(data["b"]) != m:
            raise SchemaError(f"field 'b' must have length {m}")
        terms = data["terms"]
        if not isinstance(terms, list) or not terms:
            raise SchemaError("field 'terms' must be a nonempty list")
        parsed = []
        for k, t in enumerate(terms):
            for key in ("c", "d", "alpha"):
                if key not in t:
                    raise SchemaError(f"terms[{k}] missing field '{key}'")
            if len(t["c"]) != n:
                raise SchemaError(f"terms[{k}].c must have length {n}")
            parsed.append(Term(np.asarray(t["c"], dtype=float),
                               float(t["d"]), float(t["alpha"])))
        A = np.asarray(A, dtype=float).reshape(m, n)
        return cls.from_terms(A, data["b"], parsed,
                              name=str(data.get("name", "glmp")))


def load_instance(path) -> GlmpInstance:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as err:
            raise SchemaError(f"{path}: line {err.lineno} column {err.colno}: "
                              f"{err.msg}") from None
    return GlmpInstance.from_dict(data)


def save_instance(instance: GlmpInstance, path) -> None:
    with open(path, "w") as fh:
        json.dump(instance.to_dict(), fh, indent=1)
        fh.write("\n")


# -- exponent partition -------------------------------------------------------

@dataclass(frozen=True)
class IndexPartition:
    j_plus: tuple
    j_minus: tuple

    @property
    def p_bar(self) -> int:
        return len(self.j_plus)


def partition_terms(instance: GlmpInstance) -> IndexPartition:
    """Split term indices by exponent sign, keeping the input order."""
    alpha = instance.alpha
    zero = np.flatnonzero(alpha == 0)
    if zero.size:
        raise ValueError(f"term {int(zero[0])} has a zero exponent")
    return IndexPartition(tuple(int(j) for j in np.flatnonzero(alpha > 0)),
                          tuple(int(j) for j in np.flatnonzero(alpha < 0)))


# -- assumption checks --------------------------------------------------------

@dataclass
class ValidationReport:
    feasible: bool
    bounded: bool
    term_minimums: np.ndarray
    term_maximums: np.ndarray
    coord_minimums: Optional[np.ndarray] = None
    coord_maximums: Optional[np.ndarray] = None
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _extreme(instance, g, sense):
    sol = instance.minimize_linear(sense * np.asarray(g, dtype=float))
    if sol.status is LpStatus.OPTIMAL:
        return sense * sol.value, sol.status
    if sol.status is LpStatus.UNBOUNDED:
        return -sense * np.inf, sol.status
    return np.nan, sol.status


def validate(instance: GlmpInstance,
             delta_pos: float = DEFAULT_DELTA_POS) -> ValidationReport:
    """Check nonemptiness, boundedness and term positivity by LP."""
    if delta_pos <= 0:
        raise ValueError("delta_pos must be positive")
    n, p = instance.n, instance.p
    nan_p = np.full(p, np.nan)
    report = ValidationReport(True, True, nan_p.copy(), nan_p.copy())
    zero = np.flatnonzero(instance.alpha == 0)
    for j in zero:
        report.violations.append(f"term {j}: exponent is zero")

    lo, hi = np.empty(n), np.empty(n)
    eye = np.eye(n)
    for i in range(n):
        lo[i], st_lo = _extreme(instance, eye[i], 1.0)
        if st_lo is LpStatus.INFEASIBLE:
            report.feasible = False
            report.bounded = False
            report.violations.append("feasible region is empty")
            return report
        hi[i], st_hi = _extreme(instance, eye[i], -1.0)
        if LpStatus.UNBOUNDED in (st_lo, st_hi):
            report.bounded = False
    report.coord_minimums, report.coord_maximums = lo, hi
    if not report.bounded:
        free = [i for i in range(n) if not (np.isfinite(lo[i]) and np.isfinite(hi[i]))]
        report.violations.append(f"feasible region is unbounded along x{free}")

    for j in range(p):
        report.term_minimums[j], _ = _extreme(instance, instance.c[j], 1.0)
        report.term_maximums[j], _ = _extreme(instance, instance.c[j], -1.0)
    report.term_minimums += instance.d
    report.term_maximums += instance.d
    for j in range(p):
        if not report.term_minimums[j] >= delta_pos:
            report.violations.append(
                f"term {j}: min of c'x + d over X is {report.term_minimums[j]:.6g}, "
                f"needs >= {delta_pos:g}")
    return report


# -- objectives -----------------------------------------------------------------

def _checked_bases(instance, x):
    bases = instance.bases(x)
    bad = np.flatnonzero(~(bases > 0))
    if bad.size:
        j = int(bad[0])
        raise DomainError(f"term {j} is nonpositive at x: c'x + d = {bases[j]:.6g}")
    return bases


def objective_nu(instance: GlmpInstance, x) -> float:
    """Log-domain objective sum_j alpha_j ln(c_j'x + d_j)."""
    bases = _checked_bases(instance, x)
    return float(instance.alpha @ np.log(bases))


def objective_h(instance: GlmpInstance, x) -> float:
    """Product objective prod_j (c_j'x + d_j) ** alpha_j."""
    bases = _checked_bases(instance, x)
    if instance.p <= 4 and np.all((bases >= 1e-8) & (bases <= 1e8)):
        return float(np.prod(bases ** instance.alpha))
    log_h = float(instance.alpha @ np.log(bases))
    return math.exp(log_h) if log_h < 709.0 else math.inf
