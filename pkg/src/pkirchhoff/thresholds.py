"""Embedding constants, parameter thresholds and existence gates.

The constants are estimated on the discrete grid by minimizing homogeneous
quotients with a preconditioned projected descent.  Every estimate is the
value at an actual field, so it bounds the discrete infimum from above.
The thresholds are closed-form expressions in these constants.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import EstimationError, InvalidArgumentError
from .grid import edge_differences, integrate_weighted_power, p_laplacian_weak, signed_power
from .kirchhoff import KirchhoffModel, Regime, m_value, norm_power

ESTIMATE_MAX_ITER = 10_000


# ---------------------------------------------------------------------------
# quotient minimization


def flux_preconditioner(grid, u, p, scale=1.0):
    """Banded weighted stiffness matrix approximating the p-Laplacian Hessian.

    Edge weights are ``(p-1) |d|^(p-2)`` with ``|d|`` floored at a small
    fraction of its maximum, so the matrix stays positive definite.
    """
    d = np.abs(edge_differences(grid, u))
    if p == 2:
        w = np.ones_like(d)
    else:
        floor = 1e-3 * max(float(d.max()), 1e-300)
        w = (p - 1) * np.maximum(d, floor) ** (p - 2)
    w *= scale / grid.h
    ab = np.zeros((3, grid.n))
    ab[0, 1:] = -w[1:-1]
    ab[1] = w[:-1] + w[1:]
    ab[2, :-1] = -w[1:-1]
    return ab


def _start_field(grid, weight, rng):
    """Smooth positive start, concentrated on the positive part of ``weight``."""
    x = grid.nodes / grid.length
    u = np.sin(np.pi * x)
    for k in range(2, 6):
        u = u + rng.uniform(-0.3, 0.3) / k * np.sin(k * np.pi * x)
    u = np.abs(u) + 1e-3 * np.sin(np.pi * x)
    if np.any(weight < 0):
        pos = np.convolve(np.maximum(weight, 0), np.ones(5) / 5, mode="same")
        u = u * (pos + 1e-6)
    return u


def minimize_quotient(grid, p, z, weight, *, seed=0, n_starts=5,
                      max_iter=ESTIMATE_MAX_ITER, tol=1e-13):
    """Minimize ``||u||^p / (int w |u|^z)^(p/z)`` over positive fields.

    Returns ``(value, u, info)`` where ``u`` is normalized so that
    ``int w |u|^z = 1`` and ``info`` holds per-start values.
    """
    weight = grid.check_field(weight, "weight")
    if not np.any(weight > 0):
        raise InvalidArgumentError("weight has no positive part")
    h = grid.h
    rng = np.random.default_rng(seed)

    def W(v):
        return float(np.sum(weight * np.abs(v) ** z) * h)

    def normalize(v):
        wv = W(v)
        return None if wv <= 0 else v / wv ** (1.0 / z)

    results, iters = [], []
    for _ in range(n_starts):
        u = normalize(_start_field(grid, weight, rng))
        if u is None:
            continue
        R = norm_power(grid, u, p)
        eta = 1.0
        converged = False
        for _it in range(max_iter):
            grad = p * p_laplacian_weak(grid, u, p) - p * R * weight * signed_power(u, z) * h
            d = solve_banded((1, 1), flux_preconditioner(grid, u, p, p), grad)
            gd = float(grad @ d)
            if gd <= tol * R:
                converged = True
                break
            while eta > 1e-12:
                v = normalize(np.abs(u - eta * d))
                if v is not None:
                    Rv = norm_power(grid, v, p)
                    if Rv <= R - 1e-4 * eta * gd:
                        break
                eta *= 0.5
            else:
                converged = gd <= 1e-8 * R
                break
            u, R = v, Rv
            eta = min(1.0, 2 * eta)
        if converged:
            results.append((R, u))
            iters.append(_it)
    if not results:
        raise EstimationError(
            f"quotient descent did not converge within {max_iter} iterations")
    values = [r for r, _ in results]
    best = int(np.argmin(values))
    return values[best], results[best][1], {"values": values, "iterations": iters}


def _spread(values):
    return max(values) / min(values) - 1.0


def estimate_sobolev_constant(grid, p, z, *, seed=0, n_starts=5, return_info=False):
    """Best constant ``S_z = inf ||u||^p / ||u||_{L^z}^p`` on the grid."""
    if z <= 1:
        raise InvalidArgumentError(f"z must exceed 1, got {z}")
    value, _, info = minimize_quotient(grid, p, z, grid.constant(1.0), seed=seed, n_starts=n_starts)
    return (value, info) if return_info else value


def estimate_lambda_capital(grid, p, g, *, seed=0, n_starts=5, return_info=False):
    """``Lambda = inf ||u||^(p^2)`` subject to ``int g |u|^(p^2) = 1``.

    Returns ``(Lambda, phi)`` with ``phi`` a normalized minimizer.
    """
    value, u, info = minimize_quotient(grid, p, p * p, g, seed=seed, n_starts=n_starts)
    out = (value**p, u)
    return out + (info,) if return_info else out


def estimate_S_big(grid, p, r, g, *, seed=0, n_starts=5, return_info=False):
    """Infimum of ``K(u) = ||u||^p / p - int g |u|^r / r`` on the set
    ``||u||^p = int g |u|^r``.

    Each element is scaled onto that set in closed form, which reduces the
    problem to a quotient minimization.  Returns ``(S, u0)`` with ``u0``
    on the constraint set.
    """
    if r <= p:
        raise InvalidArgumentError("the constrained infimum needs r > p")
    value, u, info = minimize_quotient(grid, p, r, g, seed=seed, n_starts=n_starts)
    # u has int g|u|^r = 1 and ||u||^p = value; s u lies on the set for
    # s^(r-p) = value.
    s = value ** (1.0 / (r - p))
    u0 = s * u
    out = ((1.0 / p - 1.0 / r) * norm_power(grid, u0, p), u0)
    return out + (info,) if return_info else out


@dataclass
class Estimates:
    """Discrete embedding constants, their extremals and run metadata."""

    S_q: float | None = None
    S_r: float | None = None
    Lambda: float | None = None
    S_big: float | None = None
    phi_Lambda: np.ndarray | None = field(default=None, repr=False)
    u0: np.ndarray | None = field(default=None, repr=False)
    seed: int = 0
    meta: dict = field(default_factory=dict, repr=False)

    def to_dict(self):
        out = {k: getattr(self, k) for k in ("S_q", "S_r", "Lambda", "S_big", "seed")}
        out["meta"] = self.meta
        return out


def estimate_constants(grid, params, *, seed=0, n_starts=5, need=None):
    """Estimate the constants the thresholds of ``params`` depend on.

    ``need`` restricts the work to a subset of
    ``{"S_q", "S_r", "Lambda", "S_big"}``; by default everything that is
    defined for the given exponents is computed.
    """
    p, q, r = params.p, params.q, params.r
    if need is None:
        need = {"S_q", "S_r", "Lambda"}
        if p < r < 2 * p:
            need.add("S_big")
    est = Estimates(seed=seed)
    kw = {"seed": seed, "n_starts": n_starts, "return_info": True}

    def record(name, info):
        est.meta[name] = {"iterations": info["iterations"], "start_spread": _spread(info["values"])}

    if "S_q" in need:
        est.S_q, info = estimate_sobolev_constant(grid, p, q, **kw)
        record("S_q", info)
    if "S_r" in need:
        est.S_r, info = estimate_sobolev_constant(grid, p, r, **kw)
        record("S_r", info)
    if "Lambda" in need and np.any(params.g > 0):
        est.Lambda, est.phi_Lambda, info = estimate_lambda_capital(grid, p, params.g, **kw)
        record("Lambda", info)
    if "S_big" in need and np.any(params.g > 0):
        est.S_big, est.u0, info = estimate_S_big(grid, p, r, params.g, **kw)
        record("S_big", info)
    return est


# ---------------------------------------------------------------------------
# closed-form thresholds


def _pos_sup(w):
    return float(np.max(np.maximum(w, 0.0)))


def lambda_1(p, q, r, a, b, S_q, S_r, f_sup, g_sup):
    """Upper bound for ``lam`` below which every ray meets the PLUS part (SUPER)."""
    if a <= 0 or r <= p * p:
        return 0.0
    first = p * S_q ** (q / p) * (a * b ** (p - 1) * (r - p * p) * (r - p) ** (p - 1)) ** (1 / p)
    first /= (r - q) * f_sup
    inner = p * S_r ** (r / p) * (a * b ** (p - 1) * (p * p - q) * (p - q) ** (p - 1)) ** (1 / p)
    inner /= (r - q) * g_sup
    return first * inner ** ((2 * p - 1 - q) / (r - 2 * p + 1))


def lambda_2(p, q, r, b, S_q, S_r, f_sup, g_sup):
    """Threshold from the pure ``b``-term comparison."""
    first = b * S_q ** (q / p) * (r - p) / ((r - q) * f_sup)
    return first * (b * S_r ** (r / p) * (p - q) / ((r - q) * g_sup)) ** ((p - q) / (r - p))


def lambda_0(p, q, lam1, lam2):
    """``max(q lam1 / p^((2p-1)/p), q lam2 / p)``."""
    return max(q * lam1 / p ** ((2 * p - 1) / p), q * lam2 / p)


def lambda_hat_0(p, q, a, b, S_q, Lam, f_sup):
    """Threshold in the critical regime, defined for ``a < 1 / Lambda``."""
    if Lam is None or a * Lam >= 1:
        return None
    first = p * b * S_q ** (q / p) / ((p * p - q) * f_sup)
    return first * (b * Lam * (p - q) / ((1 - a * Lam) * (p * p - q))) ** ((p - q) / p)


def critical_minus_floor(p, q, a, b, Lam):
    """Lower bound on ``||u||`` for MINUS elements in the critical regime."""
    if Lam is None or a * Lam >= 1:
        return None
    return (b * Lam * (p - q) / ((1 - a * Lam) * (p * p - q))) ** (1 / (p * p - p))


def minus_floor_super(p, q, r, b, S_r, g_sup):
    """Lower bound on ``||u||`` for MINUS elements: ``(b(p-q) S_r^(r/p) / ((r-q)|g+|))^(1/(r-p))``."""
    return (b * (p - q) * S_r ** (r / p) / ((r - q) * g_sup)) ** (1 / (r - p))


def minus_floor_sub(p, q, r, b, Mk, S_r, g_sup):
    """Lower bound on ``||u||`` for MINUS elements of the truncated problem."""
    return S_r ** (r / (p * (r - p))) * (min(b, Mk) * (p - q) / (g_sup * (r - q))) ** (1 / (r - p))


def plus_cap_sub(p, q, r, b, lam, S_q, f_sup):
    """Upper bound on ``||u||^p`` for the small PLUS solution."""
    return (p * lam * (r - q) * f_sup * S_q ** (-q / p) / (b * (r - p) ** p)) ** (p / (p - q))


def L_of(lam, q, r, C_star, f_sup, g_sup, measure):
    """``(lam C*^q |f+| + C*^r |g+|) |Omega|``."""
    return (lam * C_star**q * f_sup + C_star**r * g_sup) * measure


def A_hat_0(p, q, r, b, S_r, g_sup):
    if r >= p * p:
        return None
    first = b * (p - q) * (r - p) / (p * (p * p - q))
    inner = p * S_r ** (r / p) / (b * (p - q) * (r - q) * (p * p - r) * g_sup)
    return first * inner ** ((p * p - r) / (r - p))


def A_0(p, q, r, b):
    return max(
        (b * (2 * r - p) / r) ** ((p - r + q) / (r - p)),
        (b * r / p) ** ((p - r + q) / (r - p)),
        (b * r / p) ** (p / (r - p)),
    )


def A_star(p, r, b, S_big):
    if S_big is None or r >= 2 * p:
        return None
    return (p ** (r / (p - r)) * (r - p) ** p / (r * S_big)
            * ((2 * p - r) / b) ** ((p * p - r) / (r - p)))


def Lambda_hat(p, q, r, a, b, S_q, f_sup):
    if a <= 0 or r >= p * p:
        return None
    return a * (b * (r - p) / (a * (p * p - r))) ** ((p * p - q) / p) / f_sup * S_q ** (q / p)


def k_hat_of(p, r, a, b):
    """Cut ``b (r-p) / (a (2p-r))`` of the modified coefficient."""
    if a <= 0 or r >= 2 * p:
        return None
    return b * (r - p) / (a * (2 * p - r))


def truncation_cut(p, r, a, b):
    """Midpoint of ``(b(r-p)/(r a), b(r-p)/(p a))``, the cut ``k^(p-1)``."""
    return 0.5 * (b * (r - p) / (r * a) + b * (r - p) / (p * a))


@dataclass
class ThresholdBundle:
    """Every threshold the gates compare against.

    Entries that are undefined for the given exponents are ``None``.
    """

    lambda_1: float | None = None
    lambda_2: float | None = None
    lambda_0: float | None = None
    lambda_hat_0: float | None = None
    L_theta: float | None = None
    L_lambda: float | None = None
    A_hat_0: float | None = None
    A_0: float | None = None
    A_star: float | None = None
    Lambda_hat: float | None = None
    k_cut: float | None = None
    M_k: float | None = None
    k_hat: float | None = None
    C_tilde_1: float | None = None
    C_tilde_2: float | None = None
    C_tilde_3: float | None = None
    C_tilde_4: float | None = None
    lambda_tilde_0: float | None = None
    lambda_tilde_star: float | None = None
    a_bound_trunc: float | None = None
    theta: float = 1.0
    C_star: float = 1.0

    def to_dict(self):
        return asdict(self)


def starting_element(grid, params, u0, k_hat):
    """``v0 = k_hat^(1/p) u0 / ||u0||``, so that ``||v0||^p = k_hat``."""
    p = params.p
    return k_hat ** (1.0 / p) * u0 / norm_power(grid, u0, p) ** (1.0 / p)


def compute_thresholds(grid, params, estimates, *, C_star=1.0, theta=1.0):
    """Evaluate all thresholds for ``params`` from the estimated constants.

    When the constrained extremal ``u0`` is available the largest
    admissible ``lam`` for the modified-problem start is found by
    bisection.
    """
    if C_star <= 0 or theta <= 0:
        raise InvalidArgumentError("C_star and theta must be positive")
    p, q, r, a, b = params.p, params.q, params.r, params.a, params.b
    f_sup, g_sup = _pos_sup(params.f), _pos_sup(params.g)
    if f_sup == 0 or g_sup == 0:
        params.require_weight_conditions()
    S_q, S_r, Lam = estimates.S_q, estimates.S_r, estimates.Lambda
    out = ThresholdBundle(theta=theta, C_star=C_star)
    if S_q is not None and S_r is not None:
        out.lambda_1 = lambda_1(p, q, r, a, b, S_q, S_r, f_sup, g_sup)
        out.lambda_2 = lambda_2(p, q, r, b, S_q, S_r, f_sup, g_sup)
        out.lambda_0 = lambda_0(p, q, out.lambda_1, out.lambda_2)
        out.A_hat_0 = A_hat_0(p, q, r, b, S_r, g_sup)
    if S_q is not None:
        out.lambda_hat_0 = lambda_hat_0(p, q, a, b, S_q, Lam, f_sup)
        out.Lambda_hat = Lambda_hat(p, q, r, a, b, S_q, f_sup)
    measure = grid.length
    out.L_theta = L_of(theta, q, r, C_star, f_sup, g_sup, measure)
    out.L_lambda = L_of(params.lam, q, r, C_star, f_sup, g_sup, measure)
    out.A_star = A_star(p, r, b, estimates.S_big)
    out.k_hat = k_hat_of(p, r, a, b)
    if r < p * p:
        out.A_0 = A_0(p, q, r, b)
        out.a_bound_trunc = b * (r - p) / (r * out.A_0 * out.L_theta)
        if a > 0:
            k = truncation_cut(p, r, a, b)
            Mk = m_value(KirchhoffModel.plain(a, b), p, k)
            out.k_cut, out.M_k = k, Mk
            out.C_tilde_1 = (p - q) * min(b, Mk)
            out.C_tilde_2 = min(Mk * (r - p), b * (r - p) - a * (p * p - p) * k)
            out.C_tilde_4 = q * (r * b - p * Mk) / p
            if S_q is not None and S_r is not None:
                out.C_tilde_3 = ((S_r ** (r / p) * out.C_tilde_1 / ((r - q) * g_sup)) ** ((p - q) / (r - p))
                                 * S_q ** (q / p) / ((r - q) * f_sup))
                out.lambda_tilde_0 = min(theta, out.C_tilde_3 * min(out.C_tilde_2, out.C_tilde_4))
            if out.Lambda_hat is not None and out.k_hat is not None and estimates.u0 is not None:
                v0 = starting_element(grid, params, estimates.u0, out.k_hat)
                F0 = integrate_weighted_power(grid, params.f, v0, q)
                G0 = integrate_weighted_power(grid, params.g, v0, r)
                out.lambda_tilde_star = lambda_tilde_star(
                    p, q, r, a, b, out.k_hat, F0, G0, min(theta, out.Lambda_hat))
    return out


def m_bar(p, q, r, a, b, k_hat, lam, F0, t):
    """``a t^(2p-r) k^2 + b t^(p-r) k - t^(q-r) lam F0`` with ``k = ||v0||^p``."""
    return a * t ** (2 * p - r) * k_hat**2 + b * t ** (p - r) * k_hat - t ** (q - r) * lam * F0


def m_bar_root(p, q, r, a, b, k_hat, lam, F0, G0):
    """Root ``t > 1`` of ``m_bar(lam, t) = G0`` where ``m_bar`` is increasing.

    Returns ``None`` when no such root exists.
    """
    from .fibers import power_sum_roots

    terms = [(a * k_hat**2, 2 * p - r), (b * k_hat, p - r), (-lam * F0, q - r), (-G0, 0.0)]
    for t in power_sum_roots(terms, 1.0, math.inf):
        dt = 1e-7 * t
        if m_bar(p, q, r, a, b, k_hat, lam, F0, t + dt) > m_bar(p, q, r, a, b, k_hat, lam, F0, t - dt):
            return t
    return None


def lambda_tilde_star(p, q, r, a, b, k_hat, F0, G0, upper):
    """Largest ``lam <= upper`` for which the increasing ``m_bar`` root exists.

    ``F0 = int f |v0|^q`` and ``G0 = int g |v0|^r`` for the start ``v0``.
    """
    ok = lambda lam: m_bar_root(p, q, r, a, b, k_hat, lam, F0, G0) is not None  # noqa: E731
    if ok(upper):
        return upper
    lo, hi = 0.0, upper
    if not ok(lo):
        return 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * upper:
            break
    return lo


# ---------------------------------------------------------------------------
# gates


@dataclass(frozen=True)
class Gate:
    """One hypothesis comparison ``actual <relation> required``."""

    name: str
    relation: str
    required: float | None
    actual: float | None
    passed: bool

    def to_dict(self):
        return asdict(self)


def _gate(name, actual, relation, required):
    if actual is None or required is None or (isinstance(required, float) and math.isnan(required)):
        return Gate(name, relation, required, actual, False)
    ok = {
        "<": actual < required,
        "<=": actual <= required,
        ">": actual > required,
        ">=": actual >= required,
    }[relation]
    return Gate(name, relation, required, actual, bool(ok))


@dataclass
class GateReport:
    """Gate outcomes and the existence result they select."""

    regime: Regime
    gates: list
    applicable: str | None
    route: str | None = None

    def passed(self, name):
        return next(g.passed for g in self.gates if g.name == name)

    def failing(self, prefix=""):
        return [g for g in self.gates if g.name.startswith(prefix) and not g.passed]

    def to_dict(self):
        return {
            "regime": self.regime.value,
            "applicable": self.applicable,
            "route": self.route,
            "gates": [g.to_dict() for g in self.gates],
        }


def check_gates(params, bundle, estimates=None):
    """Compare ``params`` against ``bundle`` and pick the applicable result.

    Gate names carry the result they belong to as a prefix, e.g.
    ``"2.1:lambda<lambda_0"``.
    """
    p, q, r, a, b, lam = params.p, params.q, params.r, params.a, params.b, params.lam
    regime = params.regime
    gates = [
        _gate("weights:f+>0", _pos_sup(params.f), ">", 0.0),
        _gate("weights:g+>0", _pos_sup(params.g), ">", 0.0),
    ]
    weights_ok = all(g.passed for g in gates)
    applicable = route = None
    if regime is Regime.SUPER:
        gates += [
            _gate("2.1:a>0", a, ">", 0.0),
            _gate("2.1:r>2p-1", r, ">", 2 * p - 1),
            _gate("2.1:lambda>0", lam, ">", 0.0),
            _gate("2.1:lambda<lambda_0", lam, "<", bundle.lambda_0),
        ]
        if bundle.lambda_1 is not None and bundle.lambda_2 is not None:
            gates.append(_gate("nehari0-empty(super):lambda<max(lambda_1,lambda_2)", lam, "<",
                               max(bundle.lambda_1, bundle.lambda_2)))
        if weights_ok and all(g.passed for g in gates if g.name.startswith("2.1:")):
            applicable, route = "2.1", "2.1"
    elif regime is Regime.CRITICAL:
        Lam = estimates.Lambda if estimates is not None else None
        inv = None if Lam is None else 1.0 / Lam
        gates += [
            _gate("2.2:lambda>0", lam, ">", 0.0),
            _gate("2.2(i):a>=1/Lambda", a, ">=", inv),
            _gate("2.2(ii):a<1/Lambda", a, "<", inv),
            _gate("2.2(ii):lambda<lambda_hat_0/p", lam, "<",
                  None if bundle.lambda_hat_0 is None else bundle.lambda_hat_0 / p),
        ]
        if weights_ok and gates[-4].passed:
            if gates[-3].passed:
                applicable, route = "2.2", "2.2(i)"
            elif gates[-2].passed and gates[-1].passed:
                applicable, route = "2.2", "2.2(ii)"
    else:
        gates += [
            _gate("2.3:a>0", a, ">", 0.0),
            _gate("2.3:lambda>0", lam, ">", 0.0),
            _gate("2.3(ii):g>=0", float(np.min(params.g)), ">=", 0.0),
            _gate("2.3(ii):a<b(r-p)/(r A_0 L(theta))", a, "<", bundle.a_bound_trunc),
            _gate("2.3(ii):lambda<lambda_tilde_0", lam, "<", bundle.lambda_tilde_0),
            _gate("2.3(ii):C_tilde_4>0", bundle.C_tilde_4, ">", 0.0),
            _gate("2.4:f>0", float(np.min(params.f)), ">", 0.0),
            _gate("2.4:g>0", float(np.min(params.g)), ">", 0.0),
            _gate("2.4:r<2p", r, "<", 2 * p),
            _gate("2.4:a<A_star", a, "<", bundle.A_star),
            _gate("2.4:lambda<lambda_tilde_star", lam, "<", bundle.lambda_tilde_star),
        ]
        if bundle.A_hat_0 is not None:
            gates.append(_gate("nehari0-empty(sub):a>A_hat_0", a, ">", bundle.A_hat_0))
        base = weights_ok and all(g.passed for g in gates if g.name.startswith("2.3:"))
        trunc = base and all(g.passed for g in gates if g.name.startswith("2.3(ii):"))
        three = trunc and all(g.passed for g in gates if g.name.startswith("2.4:"))
        if three:
            applicable, route = "2.4", "2.4"
        elif trunc:
            applicable, route = "2.3", "2.3(ii)"
        elif base:
            applicable, route = "2.3", "2.3(i)"
    return GateReport(regime, gates, applicable, route)
