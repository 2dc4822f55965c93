"""Estimator-style front end.

The classes follow the scikit-learn conventions: constructor arguments are
stored verbatim, ``fit`` does the work and returns ``self``, learned
attributes end in an underscore, and ``get_params``/``set_params``/``clone``
work as usual.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .fibers import Branch, nehari_scaling
from .grid import build_grid
from .kirchhoff import KirchhoffModel, ProblemParams
from .solver import SolveOptions, solve
from .thresholds import estimate_constants, minimize_quotient


def _weight(grid, w):
    if np.isscalar(w):
        return grid.constant(float(w))
    return grid.check_field(w, "weight")


class NehariSolver(BaseEstimator):
    """Positive solutions of the discrete Kirchhoff problem.

    ``fit(f, g)`` estimates the embedding constants, evaluates the gates and
    runs the existence result they select.

    Attributes
    ----------
    grid_, params_ : the discretized problem
    estimates_ : estimated constants
    thresholds_, gates_ : threshold bundle and gate report
    result_ : the full pipeline result
    solutions_ : dict mapping solution names to nodal arrays
    energies_ : dict mapping solution names to energies
    """

    def __init__(self, p=2.0, q=1.5, r=5.0, a=1.0, b=1.0, lam=0.1, length=1.0, n=128,
                 C_star=1.0, theta=1.0, max_iters=50_000, step_init=1e-2,
                 residual_tol=1e-8, n_starts=5, random_state=0):
        self.p = p
        self.q = q
        self.r = r
        self.a = a
        self.b = b
        self.lam = lam
        self.length = length
        self.n = n
        self.C_star = C_star
        self.theta = theta
        self.max_iters = max_iters
        self.step_init = step_init
        self.residual_tol = residual_tol
        self.n_starts = n_starts
        self.random_state = random_state

    def _options(self):
        return SolveOptions(self.max_iters, self.step_init, self.residual_tol,
                            int(self.random_state), self.n_starts)

    def fit(self, f=1.0, g=1.0):
        """Solve for weights ``f`` and ``g`` (scalars or nodal arrays)."""
        grid = build_grid(self.length, self.n)
        params = ProblemParams(float(self.p), float(self.q), float(self.r), float(self.a),
                               float(self.b), float(self.lam), _weight(grid, f), _weight(grid, g))
        opts = self._options()
        est = estimate_constants(grid, params, seed=opts.seed, n_starts=opts.n_starts)
        result = solve(grid, params, opts, estimates=est, C_star=self.C_star, theta=self.theta)
        self.grid_ = grid
        self.params_ = params
        self.estimates_ = est
        self.thresholds_ = result.bundle
        self.gates_ = result.gates
        self.result_ = result
        self.solutions_ = {k: rep.u for k, rep in result.reports.items()}
        self.energies_ = {k: rep.energy for k, rep in result.reports.items()}
        return self


class NehariProjector(TransformerMixin, BaseEstimator):
    """Rescale fields onto one branch of the Nehari set.

    Each row of ``X`` is a nodal field on a grid of ``X.shape[1]`` interior
    nodes; ``transform`` returns the rescaled rows.
    """

    def __init__(self, p=2.0, q=1.5, r=5.0, a=1.0, b=1.0, lam=0.1, f=1.0, g=1.0,
                 length=1.0, branch="PLUS"):
        self.p = p
        self.q = q
        self.r = r
        self.a = a
        self.b = b
        self.lam = lam
        self.f = f
        self.g = g
        self.length = length
        self.branch = branch

    def fit(self, X, y=None):
        X = check_array(X)
        self.grid_ = build_grid(self.length, X.shape[1])
        self.params_ = ProblemParams(float(self.p), float(self.q), float(self.r), float(self.a),
                                     float(self.b), float(self.lam), _weight(self.grid_, self.f),
                                     _weight(self.grid_, self.g))
        self.model_ = KirchhoffModel.plain(self.a, self.b)
        self.branch_ = Branch[self.branch]
        self.n_features_in_ = X.shape[1]
        return self

    def scalings(self, X):
        """Scaling factors ``t`` for each row."""
        check_is_fitted(self, "grid_")
        X = check_array(X)
        return np.array([nehari_scaling(self.grid_, self.params_, self.model_, x, self.branch_)
                         for x in X])

    def transform(self, X):
        X = check_array(X)
        return self.scalings(X)[:, None] * X


class SobolevConstantEstimator(BaseEstimator):
    """Discrete best constant ``inf ||u||^p / ||u||_{L^z}^p``.

    ``fit()`` sets ``constant_`` and ``extremal_`` (normalized in ``L^z``).
    """

    def __init__(self, p=2.0, z=2.0, length=1.0, n=128, n_starts=5, random_state=0):
        self.p = p
        self.z = z
        self.length = length
        self.n = n
        self.n_starts = n_starts
        self.random_state = random_state

    def fit(self, X=None, y=None):
        grid = build_grid(self.length, self.n)
        value, u, info = minimize_quotient(grid, float(self.p), float(self.z), grid.constant(1.0),
                                           seed=int(self.random_state), n_starts=self.n_starts)
        self.grid_ = grid
        self.constant_ = value
        self.extremal_ = u
        self.start_values_ = info["values"]
        return self


__all__ = ["NehariSolver", "NehariProjector", "SobolevConstantEstimator"]
