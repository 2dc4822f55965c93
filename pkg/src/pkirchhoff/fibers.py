"""Fiber maps ``t -> J(t u)`` and Nehari projections.

Along the ray through ``u`` the energy depends only on four numbers,

    A = ||u||^(p^2),  B = ||u||^p,  G = int g |u|^r,  F = lam int f |u|^q,

and ``I'(t) = t^(q-1) (h(t) - F)`` with
``h(t) = t^(p-q) M(t^p B) B - G t^(r-q)``.  On every smooth piece of ``M``
the map ``h`` is a sum of at most three powers of ``t``, so all roots of
``h = F`` can be located exactly by Rolle's theorem: the critical points of
a power sum split the axis into monotone stretches, each searched by
bracketed bisection.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidArgumentError, NoMaximizerError, NoRootError, ProjectionError
from .grid import integrate_weighted_power
from .kirchhoff import Variant, as_model, m_hat, m_prime, m_value, norm_power

#: Relative size below which a second derivative counts as zero.
ZERO_TOL = 1e-10
MAX_DOUBLINGS = 200
MAX_BISECTIONS = 400


class Branch(Enum):
    PLUS = 1
    ZERO = 0
    MINUS = -1


@dataclass(frozen=True)
class FiberProfile:
    """The scalars that determine ``J`` along one ray."""

    A: float
    B: float
    G: float
    F: float
    p: float
    q: float
    r: float

    @classmethod
    def from_field(cls, grid, params, u):
        u = grid.check_field(u)
        p = params.p
        B = norm_power(grid, u, p)
        return cls(
            A=B**p,
            B=B,
            G=integrate_weighted_power(grid, params.g, u, params.r),
            F=params.lam * integrate_weighted_power(grid, params.f, u, params.q),
            p=p, q=params.q, r=params.r,
        )

    def to_dict(self):
        return {k: getattr(self, k) for k in ("A", "B", "G", "F", "p", "q", "r")}


@dataclass(frozen=True)
class NehariClass:
    """Branch of a point together with the numbers that decided it.

    ``second_derivative`` is ``I''(1)`` for the classified field, ``scale``
    the sum of magnitudes of its terms and ``membership`` the value of
    ``I'(1)``.
    """

    branch: Branch
    second_derivative: float
    scale: float
    membership: float = 0.0


# ---------------------------------------------------------------------------
# power sums


def _combine(terms):
    acc = {}
    for c, e in terms:
        if c != 0.0:
            acc[e] = acc.get(e, 0.0) + c
    return sorted(((c, e) for e, c in acc.items() if c != 0.0), key=lambda ce: ce[1])


def _psum(terms, t):
    total = 0.0
    for c, e in terms:
        try:
            total += c * t**e
        except OverflowError:
            return math.copysign(math.inf, c)
    return total


def _sign(x):
    x = float(x)
    return (x > 0) - (x < 0)


def _scale_guess(terms):
    """Geometric mean of the pairwise balance points of a power sum."""
    logs = []
    for i in range(len(terms)):
        for j in range(i + 1, len(terms)):
            (ci, ei), (cj, ej) = terms[i], terms[j]
            if ej != ei:
                # clamp so nearly equal exponents cannot overflow the guess
                logs.append(max(-300.0, min(300.0, math.log(abs(ci / cj)) / (ej - ei))))
    return math.exp(sum(logs) / len(logs)) if logs else 1.0


def _bisect(fun, lo, hi, s_lo):
    """Shrink ``[lo, hi]`` around the sign change of ``fun`` to machine precision."""
    for _ in range(MAX_BISECTIONS):
        mid = math.sqrt(lo * hi) if hi > 4 * lo else 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        s = _sign(fun(mid))
        if s == 0:
            return mid
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _monotone_root(terms, x0, x1, guess):
    """Root of a monotone power sum on ``(x0, x1)``; ``None`` if absent.

    ``terms`` are normalized so the first one is the constant term, hence
    the limit at ``0+`` is its coefficient.
    """
    f = lambda t: _psum(terms, t)  # noqa: E731
    s0 = _sign(terms[0][0]) if terms[0][1] == 0 and x0 == 0 else _sign(f(x0))
    if x0 > 0 and s0 == 0:
        return x0
    s1 = _sign(terms[-1][0]) if math.isinf(x1) else _sign(f(x1))
    if s1 == 0:
        return None  # reported by the neighbouring stretch
    if s0 == s1 or s0 == 0:
        return None
    lo, hi = x0, x1
    if lo == 0:
        lo = min(guess, hi / 2) if math.isfinite(hi) else guess
        for _ in range(MAX_DOUBLINGS):
            if _sign(f(lo)) == s0:
                break
            lo /= 2
        else:
            raise NoRootError("lower bracket did not converge")
    if math.isinf(hi):
        hi = max(guess, 2 * lo)
        for _ in range(MAX_DOUBLINGS):
            if _sign(f(hi)) == s1:
                break
            hi *= 2
        else:
            raise NoRootError("upper bracket did not converge after 200 doublings")
    return _bisect(f, lo, hi, _sign(f(lo)) or s0)


def power_sum_roots(terms, lo=0.0, hi=math.inf):
    """All roots of ``sum c t^e`` on the open interval ``(lo, hi)``.

    Exact root counts follow from Rolle's theorem applied recursively to
    the derivative; each root is bracketed and refined by bisection.
    """
    terms = _combine(terms)
    if len(terms) <= 1:
        return []
    e0 = terms[0][1]
    q = [(c, e - e0) for c, e in terms]
    dq = [(c * e, e - 1) for c, e in q[1:]]
    crit = power_sum_roots(dq, lo, hi)
    guess = _scale_guess(q)
    knots = [lo, *crit, hi]
    roots = []
    for x0, x1 in zip(knots[:-1], knots[1:]):
        t = _monotone_root(q, x0, x1, guess)
        if t is not None and (not roots or t > roots[-1]):
            roots.append(t)
    return roots


def _dterms(terms):
    return [(c * e, e - 1) for c, e in terms if e != 0]


# ---------------------------------------------------------------------------
# fiber maps for any model


def _pieces(profile, model):
    """Smooth pieces of ``h`` as ``(t_lo, t_hi, terms)``."""
    p, q, r = profile.p, profile.q, profile.r
    A, B, G = profile.A, profile.B, profile.G
    a, b = model.a, model.b
    plain = [(a * A, p * p - q), (b * B, p - q), (-G, r - q)]
    if model.variant is Variant.PLAIN or B == 0:
        return [(0.0, math.inf, plain)]
    tc = (model.cut / B) ** (1.0 / p)
    if model.variant is Variant.TRUNCATED:
        upper = [(m_value(model, p, model.cut) * B, p - q), (-G, r - q)]
        return [(0.0, tc, plain), (tc, math.inf, upper)]
    c = model.a * model.cut ** ((p * p - model.q) / p)
    lower = [(c * B ** (q / p), 0.0), (b * B, p - q), (-G, r - q)]
    return [(0.0, tc, lower), (tc, math.inf, plain)]


def fiber_value(profile, model, t):
    """``I(t) = (1/p) M_hat(t^p B) - F t^q / q - G t^r / r``."""
    m = as_model(model)
    p, q, r = profile.p, profile.q, profile.r
    return m_hat(m, p, t**p * profile.B) / p - profile.F * t**q / q - profile.G * t**r / r


def fiber_deriv1(profile, model, t):
    """``I'(t) = t^(p-1) M(t^p B) B - F t^(q-1) - G t^(r-1)``."""
    m = as_model(model)
    p, q, r = profile.p, profile.q, profile.r
    s = t**p * profile.B
    return t ** (p - 1) * m_value(m, p, s) * profile.B - profile.F * t ** (q - 1) - profile.G * t ** (r - 1)


def _deriv2_terms(profile, m, t):
    p, q, r = profile.p, profile.q, profile.r
    B = profile.B
    s = t**p * B
    return (
        (p - 1) * t ** (p - 2) * m_value(m, p, s) * B,
        p * t ** (2 * p - 2) * m_prime(m, p, s) * B * B,
        -(q - 1) * profile.F * t ** (q - 2),
        -(r - 1) * profile.G * t ** (r - 2),
    )


def fiber_deriv2(profile, model, t):
    """``I''(t)`` on the smooth piece containing ``t^p B``."""
    return sum(_deriv2_terms(profile, as_model(model), t))


def h_map(profile, a, b, t):
    """``h_a(t) = a t^(p^2-q) A + b t^(p-q) B - t^(r-q) G`` (plain model)."""
    p, q, r = profile.p, profile.q, profile.r
    return a * t ** (p * p - q) * profile.A + b * t ** (p - q) * profile.B - t ** (r - q) * profile.G


def h_map_prime(profile, a, b, t):
    """Derivative of :func:`h_map` in ``t``."""
    p, q, r = profile.p, profile.q, profile.r
    return (a * (p * p - q) * t ** (p * p - q - 1) * profile.A
            + b * (p - q) * t ** (p - q - 1) * profile.B
            - (r - q) * t ** (r - q - 1) * profile.G)


def h_maximizer(profile, a, b):
    """First local maximizer ``t_max`` of ``h_a`` on ``(0, inf)``.

    With ``a = 0`` the closed form
    ``(b (p-q) B / ((r-q) G))^(1/(r-p))`` is returned.
    """
    p, q, r = profile.p, profile.q, profile.r
    if profile.G <= 0:
        raise NoMaximizerError("G <= 0: h_a is increasing and has no maximizer")
    if a == 0:
        return (b * (p - q) * profile.B / ((r - q) * profile.G)) ** (1.0 / (r - p))
    terms = [(a * profile.A, p * p - q), (b * profile.B, p - q), (-profile.G, r - q)]
    second = _dterms(_dterms(terms))
    for t in power_sum_roots(_dterms(terms)):
        if _psum(second, t) < 0:
            return t
    raise NoMaximizerError("h_a has no interior local maximum")


def _classify_t(profile, m, terms, t):
    """Branch of the point ``t u`` from the sign of ``h'`` at ``t``."""
    dh = _psum(_dterms(terms), t)
    mags = [abs(c * e * t ** (e - 1)) for c, e in terms if e != 0]
    scale = sum(mags)
    q = profile.q
    second = t ** (q + 1) * dh  # = I''_{tu}(1) at a Nehari point
    if abs(dh) <= ZERO_TOL * scale:
        branch = Branch.ZERO
    else:
        branch = Branch.PLUS if dh > 0 else Branch.MINUS
    return NehariClass(branch, second, t ** (q + 1) * scale)


def nehari_roots(profile, model):
    """All ``t > 0`` with ``t u`` on the Nehari set, sorted and classified.

    Returns a list of ``(t, NehariClass)``.  Raises :class:`NoRootError`
    when the ray never meets the Nehari set.
    """
    m = as_model(model)
    if profile.B <= 0:
        raise InvalidArgumentError("the zero field has no Nehari scaling")
    pieces = _pieces(profile, m)
    found = []
    for lo, hi, terms in pieces:
        for t in power_sum_roots(terms + [(-profile.F, 0.0)], lo, hi):
            found.append((t, _classify_t(profile, m, terms, t)))
    found.sort(key=lambda x: x[0])
    out = []
    for t, cls in found:
        if out and abs(t - out[-1][0]) <= 1e-14 * t:
            continue
        out.append((t, cls))
    if not out:
        raise NoRootError(_no_root_reason(profile, m))
    return out


def _no_root_reason(profile, m):
    if profile.F <= 0 and profile.G <= 0:
        return "F <= 0 and G <= 0: the fiber map is increasing"
    if m.variant is Variant.PLAIN and profile.G > 0:
        try:
            t = h_maximizer(profile, m.a, m.b)
            return f"F >= h_a(t_max) = {h_map(profile, m.a, m.b, t):.6g}"
        except NoMaximizerError:
            pass
    return "h never reaches F"


def classify(grid, params, model, u):
    """Classify ``u`` by the sign of ``I''(1)`` with a relative zero band."""
    m = as_model(model)
    prof = FiberProfile.from_field(grid, params, u)
    if prof.B == 0:
        raise InvalidArgumentError("cannot classify the zero field")
    terms = _deriv2_terms(prof, m, 1.0)
    second = sum(terms)
    scale = sum(abs(x) for x in terms)
    if abs(second) <= ZERO_TOL * scale:
        branch = Branch.ZERO
    else:
        branch = Branch.PLUS if second > 0 else Branch.MINUS
    return NehariClass(branch, second, scale, fiber_deriv1(prof, m, 1.0))


def nehari_scaling(grid, params, model, u, branch):
    """Scaling ``t`` putting ``t u`` on the requested branch.

    When a branch has several roots the one nearest ``t = 1`` (in log
    scale) is chosen, which keeps descent iterates on one component.
    """
    u = grid.check_field(u)
    if not np.any(u):
        raise InvalidArgumentError("cannot project the zero field")
    branch = Branch[branch] if isinstance(branch, str) else branch
    if branch is Branch.ZERO:
        raise InvalidArgumentError("projection targets PLUS or MINUS")
    prof = FiberProfile.from_field(grid, params, u)
    try:
        roots = nehari_roots(prof, model)
    except NoRootError as exc:
        raise ProjectionError(f"no Nehari point on this ray: {exc}", "no-root") from exc
    cand = [t for t, c in roots if c.branch is branch]
    if not cand:
        raise ProjectionError(f"ray meets the Nehari set but not its {branch.name} part",
                              f"no-{branch.name.lower()}-root")
    return min(cand, key=lambda t: abs(math.log(t)))


def project_to_nehari(grid, params, model, u, branch):
    """Rescale ``u`` onto the PLUS or MINUS part of the Nehari set."""
    return nehari_scaling(grid, params, model, u, branch) * grid.check_field(u)


# ---------------------------------------------------------------------------
# auxiliary scalar maps


class AuxKind(Enum):
    M_A = "M_A"
    H_BAR = "H_BAR"
    H_HAT = "H_HAT"
    H_BAR_2P = "H_BAR_2P"
    H_TILDE = "H_TILDE"
    M_BAR = "M_BAR"


def auxiliary_map(kind, profile, t, *, a=0.0, b=1.0):
    """Evaluate one of the auxiliary scalar maps used by the existence proofs.

    ``F`` in the profile already carries the factor ``lam``.  For ``H_HAT``
    the profile belongs to the extremal ``phi`` with ``G = int g phi^(p^2)``;
    for ``M_BAR`` it belongs to the starting element ``v0``.
    """
    kind = AuxKind(kind) if isinstance(kind, str) else kind
    p, q, r = profile.p, profile.q, profile.r
    A, B, G, F = profile.A, profile.B, profile.G, profile.F
    if kind is AuxKind.M_A:
        nrm = B ** (1.0 / p)
        return p * (a * b) ** (1.0 / p) * t ** (2 * p - q - 1) * nrm ** (2 * p - 1) - t ** (r - q) * G
    if kind is AuxKind.H_BAR:
        return a * t ** (p * p - r) * A + b * t ** (p - r) * B - t ** (q - r) * F
    if kind is AuxKind.H_HAT:
        return b * t ** (p - q) * B - t ** (p * p - q) * (G - a * A)
    if kind is AuxKind.H_BAR_2P:
        return b * t ** (-p) * B - t ** (q - 2 * p) * F
    if kind is AuxKind.H_TILDE:
        return h_map(profile, a, b, t)
    if kind is AuxKind.M_BAR:
        return a * t ** (2 * p - r) * B * B + b * t ** (p - r) * B - t ** (q - r) * F
    raise InvalidArgumentError(f"unknown auxiliary map {kind}")


def h_bar_2p_maximizer(profile, b):
    """Closed-form maximizer ``((2p-q) F / (p b B))^(1/(p-q))``."""
    p, q = profile.p, profile.q
    if profile.F <= 0:
        raise NoMaximizerError("F <= 0: no interior maximizer")
    return ((2 * p - q) * profile.F / (p * b * profile.B)) ** (1.0 / (p - q))
