"""Nehari-manifold solver for discrete p-Kirchhoff problems.

The problem is

    -M(||u||^p) Delta_p u = lam f |u|^(q-2) u + g |u|^(r-2) u   in (0, L),
    u = 0 on the boundary,

with ``M(s) = a s^(p-1) + b`` and ``1 < q < p < r``.  The package
discretizes it by finite differences, analyzes the fiber maps
``t -> J(t u)``, estimates the embedding constants entering the existence
thresholds and finds positive solutions by projected descent on the
branches of the Nehari set.
"""

from .errors import (ConstructionError, EstimationError, GateRefusal, InvalidArgumentError,
                     NoMaximizerError, NoRootError, ProjectionError, RangeError, SolverError)
from .estimator import NehariProjector, NehariSolver, SobolevConstantEstimator
from .fibers import (AuxKind, Branch, FiberProfile, NehariClass, auxiliary_map, classify,
                     fiber_deriv1, fiber_deriv2, fiber_value, h_map, h_map_prime, h_maximizer,
                     nehari_roots, project_to_nehari)
from .grid import (Grid, build_grid, field_from_csv, field_to_csv, integrate_weighted_power,
                   seminorm_w1p)
from .kirchhoff import (KirchhoffModel, ProblemParams, Regime, Variant, classify_regime, energy,
                        energy_gradient, m_hat, m_value, residual_norm, weak_residual)
from .solver import (PipelineResult, SolveOptions, SolveReport, blowup_ladder, construct_v0,
                     minimize_global, minimize_on_branch, solve, solve_theorem_2_1,
                     solve_theorem_2_2, solve_theorem_2_3, solve_theorem_2_4, verify_solution)
from .thresholds import (Estimates, GateReport, ThresholdBundle, check_gates, compute_thresholds,
                         estimate_constants, estimate_lambda_capital, estimate_S_big,
                         estimate_sobolev_constant)

__version__ = "0.1.0"
