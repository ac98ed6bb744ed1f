"""Global optimization of generalized linear multiplicative programs.

Minimizes ``prod_j (c_j'x + d_j) ** alpha_j`` over ``{x : A x <= b}`` by
simplicial branch and bound in the space of reciprocals of the
positive-exponent terms.
"""
import logging

from .bb import (InvalidInstanceError, OuterSpaceBB, SolveResult, SolverConfig,
                 Status, compute_t_bounds, refit_t, solve, theorem5_bound)
from .generate import GenSpec, generate
from .linprog import LinearOracle, LpProblem, LpSolution, LpStatus, solve_lp
from .model import (GlmpInstance, IndexPartition, Term, ValidationReport,
                    load_instance, objective_h, objective_nu, partition_terms,
                    save_instance, validate)
from .simplex_geom import (BoundsBox, SimplexNode, barycentric, bisect,
                           initial_simplex, longest_edge, volume)
from .subsolve import PsiBracket, RelaxResult, eval_psi, lemma1_slack, phi, solve_lb

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())
