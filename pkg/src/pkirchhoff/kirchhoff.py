"""Kirchhoff coefficients and the discrete energy with its exact gradient.

The energy of a field ``u`` is

    J(u) = (1/p) M_hat(||u||^p) - (lam/q) int f |u|^q - (1/r) int g |u|^r

with ``M(s) = a s^(p-1) + b`` in the plain model.  Two variants replace
``M`` above or below a cut: a truncated one (constant above ``k``) and a
modified one (a sublinear power below ``k_hat``).
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidArgumentError, RangeError
from .grid import edge_differences, integrate_weighted_power, p_laplacian_weak, signed_power

#: Tolerance for classifying ``r`` as critical (``r == p^2``).
CRITICAL_TOL = 1e-12


class Variant(Enum):
    PLAIN = "PLAIN"
    TRUNCATED = "TRUNCATED"
    MODIFIED = "MODIFIED"


class Regime(Enum):
    SUPER = "SUPER"
    CRITICAL = "CRITICAL"
    SUB = "SUB"


@dataclass(frozen=True)
class KirchhoffModel:
    """Coefficient function ``M`` and its primitive.

    Parameters
    ----------
    variant : Variant
    a, b : float
        Kirchhoff coefficients, ``a >= 0`` and ``b > 0``.
    cut : float, optional
        ``k`` for TRUNCATED, ``k_hat`` for MODIFIED.
    q : float, optional
        Concave exponent, stored by the MODIFIED variant.
    """

    variant: Variant
    a: float
    b: float
    cut: float | None = None
    q: float | None = None

    def __post_init__(self):
        if not (self.a >= 0 and math.isfinite(self.a)):
            raise InvalidArgumentError(f"a must be finite and >= 0, got {self.a}")
        if not (self.b > 0 and math.isfinite(self.b)):
            raise InvalidArgumentError(f"b must be finite and > 0, got {self.b}")
        if self.variant is not Variant.PLAIN:
            if self.cut is None or not (self.cut > 0 and math.isfinite(self.cut)):
                raise InvalidArgumentError(
                    f"{self.variant.value} model needs a positive finite cut")
        if self.variant is Variant.MODIFIED and (self.q is None or self.q <= 0):
            raise InvalidArgumentError("MODIFIED model needs the exponent q > 0")

    @classmethod
    def plain(cls, a, b):
        return cls(Variant.PLAIN, float(a), float(b))

    @classmethod
    def truncated(cls, a, b, k_cut):
        return cls(Variant.TRUNCATED, float(a), float(b), float(k_cut))

    @classmethod
    def modified(cls, a, b, k_hat, q):
        return cls(Variant.MODIFIED, float(a), float(b), float(k_hat), float(q))

    def to_dict(self):
        out = {"variant": self.variant.value, "a": self.a, "b": self.b}
        if self.cut is not None:
            out["cut"] = self.cut
        if self.q is not None:
            out["q"] = self.q
        return out


def as_model(model):
    """Accept a :class:`KirchhoffModel` or an ``(a, b)`` pair."""
    if isinstance(model, KirchhoffModel):
        return model
    a, b = model
    return KirchhoffModel.plain(a, b)


def _check_s(s):
    if not s >= 0 or not math.isfinite(s):
        raise InvalidArgumentError(f"M is defined for finite s >= 0, got {s}")


def _plain_m(a, b, p, s):
    return a * s ** (p - 1) + b


def _plain_m_hat(a, b, p, s):
    return a * s**p / p + b * s


def _mod_coef(model, p):
    return model.a * model.cut ** ((p * p - model.q) / p)


def m_value(model, p, s):
    """Evaluate ``M(s)``; the MODIFIED variant has no value at ``s = 0``."""
    _check_s(s)
    a, b = model.a, model.b
    v = model.variant
    if v is Variant.TRUNCATED and s > model.cut:
        return _plain_m(a, b, p, model.cut)
    if v is Variant.MODIFIED and s <= model.cut:
        if s == 0:
            raise RangeError("modified M is singular at s = 0")
        return _mod_coef(model, p) * s ** ((model.q - p) / p) + b
    return _plain_m(a, b, p, s)


def m_prime(model, p, s):
    """Derivative ``M'(s)`` on the smooth piece containing ``s``."""
    _check_s(s)
    a = model.a
    v = model.variant
    if v is Variant.TRUNCATED and s > model.cut:
        return 0.0
    if v is Variant.MODIFIED and s <= model.cut:
        if s == 0:
            raise RangeError("modified M is singular at s = 0")
        e = (model.q - p) / p
        return _mod_coef(model, p) * e * s ** (e - 1)
    if p == 2:
        return a
    if s == 0:
        return 0.0 if p > 2 else (math.inf if a > 0 else 0.0)
    return a * (p - 1) * s ** (p - 2)


def m_hat(model, p, s):
    """Primitive ``int_0^s M``, continuous across every cut."""
    _check_s(s)
    a, b = model.a, model.b
    v = model.variant
    if v is Variant.TRUNCATED and s > model.cut:
        k = model.cut
        return _plain_m_hat(a, b, p, k) + _plain_m(a, b, p, k) * (s - k)
    if v is Variant.MODIFIED:
        k = model.cut
        c = _mod_coef(model, p)
        lower = c * (p / model.q) * min(s, k) ** (model.q / p) + b * min(s, k)
        if s <= k:
            return lower
        return lower + (_plain_m_hat(a, b, p, s) - _plain_m_hat(a, b, p, k))
    return _plain_m_hat(a, b, p, s)


def classify_regime(p, r):
    """SUPER if ``r > p^2``, CRITICAL if equal within tolerance, else SUB."""
    if abs(r - p * p) <= CRITICAL_TOL:
        return Regime.CRITICAL
    return Regime.SUPER if r > p * p else Regime.SUB


@dataclass(frozen=True)
class ProblemParams:
    """Exponents, coefficients and weights of one problem instance."""

    p: float
    q: float
    r: float
    a: float
    b: float
    lam: float
    f: np.ndarray = field(repr=False)
    g: np.ndarray = field(repr=False)

    def __post_init__(self):
        p, q, r = self.p, self.q, self.r
        if not all(math.isfinite(x) for x in (p, q, r, self.a, self.b, self.lam)):
            raise InvalidArgumentError("parameters must be finite")
        if not 1 < q < p < r:
            raise InvalidArgumentError(f"need 1 < q < p < r, got q={q}, p={p}, r={r}")
        if self.a < 0:
            raise InvalidArgumentError(f"a must be >= 0, got {self.a}")
        if self.b <= 0:
            raise InvalidArgumentError(f"b must be > 0, got {self.b}")
        if self.lam < 0:
            raise InvalidArgumentError(f"lambda must be >= 0, got {self.lam}")
        for name in ("f", "g"):
            w = np.asarray(getattr(self, name), dtype=float)
            if w.ndim != 1 or not np.all(np.isfinite(w)):
                raise InvalidArgumentError(f"{name} must be a finite 1-D array")
            object.__setattr__(self, name, w)
        if self.f.shape != self.g.shape:
            raise InvalidArgumentError("f and g must share one grid")

    @property
    def regime(self):
        return classify_regime(self.p, self.r)

    def plain_model(self):
        return KirchhoffModel.plain(self.a, self.b)

    def replace(self, **changes):
        kw = {k: getattr(self, k) for k in ("p", "q", "r", "a", "b", "lam", "f", "g")}
        kw.update(changes)
        return ProblemParams(**kw)

    def require_weight_conditions(self):
        """Reject weights whose positive parts vanish identically."""
        if not np.any(self.f > 0):
            raise InvalidArgumentError("condition (i) violated: f+ vanishes identically")
        if not np.any(self.g > 0):
            raise InvalidArgumentError("condition (ii) violated: g+ vanishes identically")


def _check_grid(grid, params, u):
    if params.f.shape != (grid.n,):
        raise InvalidArgumentError(
            f"weights have {params.f.shape[0]} nodes, grid has {grid.n}")
    return grid.check_field(u)


def norm_power(grid, u, p):
    """``||u||^p`` without the final root."""
    d = edge_differences(grid, u)
    return float(np.sum(np.abs(d) ** p) * grid.h)


def energy(grid, params, model, u):
    """Discrete energy ``J(u)``."""
    u = _check_grid(grid, params, u)
    p, q, r = params.p, params.q, params.r
    B = norm_power(grid, u, p)
    src = params.lam / q * integrate_weighted_power(grid, params.f, u, q)
    src += integrate_weighted_power(grid, params.g, u, r) / r
    return m_hat(model, p, B) / p - src


def residual_terms(grid, params, model, u):
    """Split the gradient into its Kirchhoff and source parts.

    Returns ``(K, S)`` with ``grad J = K - S``.
    """
    u = _check_grid(grid, params, u)
    p = params.p
    if not np.any(u):
        zero = np.zeros(grid.n)
        return zero, zero.copy()
    B = norm_power(grid, u, p)
    K = m_value(model, p, B) * p_laplacian_weak(grid, u, p)
    S = grid.h * (params.lam * params.f * signed_power(u, params.q)
                  + params.g * signed_power(u, params.r))
    return K, S


def energy_gradient(grid, params, model, u):
    """Exact gradient of :func:`energy` with respect to the nodal values."""
    K, S = residual_terms(grid, params, model, u)
    return K - S


def weak_residual(grid, params, model, u):
    """Nodal weak residual of the Euler-Lagrange equation.

    By construction this equals :func:`energy_gradient`.
    """
    return energy_gradient(grid, params, model, u)


def residual_norm(grid, params, model, u):
    """Max-norm of the residual relative to the size of its two parts.

    The scale is ``max_i (|K_i| + |S_i|)``, floored at 1, so the measure
    equals the absolute max-norm for order-one problems and stays
    meaningful when the Kirchhoff factor is large.
    """
    K, S = residual_terms(grid, params, model, u)
    scale = max(1.0, float(np.max(np.abs(K) + np.abs(S))))
    return float(np.max(np.abs(K - S))) / scale
