import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pkirchhoff.errors import InvalidArgumentError, NoMaximizerError, NoRootError, ProjectionError
from pkirchhoff.fibers import (AuxKind, Branch, FiberProfile, auxiliary_map, classify,
                               fiber_deriv1, fiber_deriv2, fiber_value, h_bar_2p_maximizer, h_map,
                               h_map_prime, h_maximizer, nehari_roots, nehari_scaling,
                               power_sum_roots, project_to_nehari)
from pkirchhoff.grid import build_grid
from pkirchhoff.kirchhoff import KirchhoffModel, ProblemParams

pos = st.floats(0.05, 20.0)


def _prof(p, q, r, B, G, F):
    return FiberProfile(B**p, B, G, F, p, q, r)


def _scan_roots(fun, lo=1e-6, hi=1e6, n=200_001):
    t = np.geomspace(lo, hi, n)
    v = np.array([fun(x) for x in t])
    return int(np.count_nonzero(np.signbit(v[:-1]) != np.signbit(v[1:])))


# ---------------------------------------------------------------- power sums


def test_power_sum_roots_frozen():
    # (t - 1)(t - 2)(t - 3) = t^3 - 6 t^2 + 11 t - 6
    roots = power_sum_roots([(1, 3), (-6, 2), (11, 1), (-6, 0)])
    np.testing.assert_allclose(roots, [1, 2, 3], rtol=1e-14)
    # t^0.5 - 2 has the single root 4
    assert power_sum_roots([(1, 0.5), (-2, 0)]) == pytest.approx([4.0], rel=1e-15)
    assert power_sum_roots([(1, 2), (1, 0)]) == []


def test_power_sum_roots_interval():
    terms = [(1, 3), (-6, 2), (11, 1), (-6, 0)]
    assert power_sum_roots(terms, 1.5, 2.5) == pytest.approx([2.0], rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(-5, 5).filter(lambda c: abs(c) > 0.05),
                          st.integers(-12, 24).map(lambda k: k / 4)), min_size=2, max_size=4))
def test_power_sum_roots_are_roots_and_respect_descartes(terms):
    roots = power_sum_roots(terms)
    comb = {}
    for c, e in terms:
        comb[e] = comb.get(e, 0.0) + c
    coefs = [comb[e] for e in sorted(comb) if comb[e] != 0]
    changes = sum(1 for x, y in zip(coefs, coefs[1:]) if x * y < 0)
    assert len(roots) <= changes
    assert roots == sorted(roots)
    for t in roots:
        val = sum(c * t**e for c, e in terms)
        mag = sum(abs(c * t**e) for c, e in terms)
        assert abs(val) <= 1e-9 * mag


# ---------------------------------------------------------------- plain fibers


@settings(max_examples=80, deadline=None)
@given(p=st.sampled_from([1.5, 2.0, 3.0]), qf=st.floats(0.1, 0.9), rx=st.floats(0.2, 12.0),
       a=st.one_of(st.just(0.0), st.floats(1e-3, 3.0)), b=pos, B=pos, G=pos, F=st.floats(-5, 5))
def test_roots_satisfy_nehari_and_branches_alternate(p, qf, rx, a, b, B, G, F):
    q, r = 1 + (p - 1) * qf, p + rx
    prof = _prof(p, q, r, B, G, F)
    model = KirchhoffModel.plain(a, b)
    try:
        roots = nehari_roots(prof, model)
    except NoRootError:
        return
    for t, cls in roots:
        mag = abs(h_map(prof, a, b, t)) + abs(F) + G * t ** (r - q)
        assert abs(h_map(prof, a, b, t) - F) <= 1e-10 * mag
        assert cls.branch in (Branch.PLUS, Branch.MINUS, Branch.ZERO)
        assert math.copysign(1, fiber_deriv2(prof, model, t)) == math.copysign(1, h_map_prime(prof, a, b, t))
    branches = [c.branch for _, c in roots if c.branch is not Branch.ZERO]
    assert all(x is not y for x, y in zip(branches, branches[1:]))
    if r > p * p or a == 0:
        assert branches[-1] is Branch.MINUS  # the G term dominates for large t


@settings(max_examples=40, deadline=None)
@given(p=st.sampled_from([2.0, 2.5]), a=st.floats(0.1, 3.0), b=pos, B=pos, G=pos, frac=st.floats(0.05, 0.95))
def test_super_two_roots_bracket_maximizer(p, a, b, B, G, frac):
    q, r = p - 0.5, p * p + 1.0
    base = _prof(p, q, r, B, G, 0.0)
    tmax = h_maximizer(base, a, b)
    assert abs(h_map_prime(base, a, b, tmax)) <= 1e-8 * (abs(h_map(base, a, b, tmax)) + G * tmax ** (r - q)) / tmax
    prof = _prof(p, q, r, B, G, frac * h_map(base, a, b, tmax))
    roots = nehari_roots(prof, KirchhoffModel.plain(a, b))
    assert [c.branch for _, c in roots] == [Branch.PLUS, Branch.MINUS]
    assert roots[0][0] < tmax < roots[1][0]


def test_h_maximizer_closed_form_a0():
    prof = _prof(2.0, 1.5, 5.0, 2.0, 3.0, 0.0)
    t = h_maximizer(prof, 0.0, 1.0)
    assert t == pytest.approx((0.5 * 2.0 / (3.5 * 3.0)) ** (1 / 3), rel=1e-15)
    assert h_map_prime(prof, 0.0, 1.0, t) == pytest.approx(0.0, abs=1e-14)


def test_h_maximizer_needs_positive_g():
    with pytest.raises(NoMaximizerError):
        h_maximizer(_prof(2.0, 1.5, 5.0, 1.0, 0.0, 1.0), 1.0, 1.0)


def test_no_root_reason():
    with pytest.raises(NoRootError, match="increasing"):
        nehari_roots(_prof(2.0, 1.5, 5.0, 1.0, 0.0, -1.0), (1.0, 1.0))
    with pytest.raises(NoRootError, match="t_max"):
        nehari_roots(_prof(2.0, 1.5, 5.0, 1.0, 1.0, 1e6), (1.0, 1.0))


def test_fiber_value_and_derivatives_consistent():
    prof = _prof(2.5, 1.7, 4.0, 1.3, 0.8, 0.6)
    m = KirchhoffModel.plain(0.4, 1.2)
    for t in (0.3, 1.0, 2.2):
        d = 1e-6 * t
        fd1 = (fiber_value(prof, m, t + d) - fiber_value(prof, m, t - d)) / (2 * d)
        fd2 = (fiber_deriv1(prof, m, t + d) - fiber_deriv1(prof, m, t - d)) / (2 * d)
        assert fiber_deriv1(prof, m, t) == pytest.approx(fd1, rel=1e-7)
        assert fiber_deriv2(prof, m, t) == pytest.approx(fd2, rel=1e-7)


# ---------------------------------------------------------------- cut models


@pytest.mark.parametrize("variant", ["TRUNCATED", "MODIFIED"])
@pytest.mark.parametrize("cut", [0.05, 1.0, 30.0])
def test_cut_model_roots_match_scan(variant, cut):
    p, q, r, a, b = 2.0, 1.5, 3.0, 0.5, 1.0
    prof = _prof(p, q, r, 1.0, 0.6, 0.3)
    m = (KirchhoffModel.truncated(a, b, cut) if variant == "TRUNCATED"
         else KirchhoffModel.modified(a, b, cut, q))
    try:
        roots = nehari_roots(prof, m)
    except NoRootError:
        roots = []
    assert len(roots) == _scan_roots(lambda t: fiber_deriv1(prof, m, t))
    for t, _ in roots:
        assert abs(fiber_deriv1(prof, m, t)) <= 1e-10 * (1 + abs(fiber_value(prof, m, t)))


# ---------------------------------------------------------------- fields


@pytest.fixture
def setup():
    g = build_grid(1.0, 32)
    prm = ProblemParams(2.0, 1.5, 5.0, 1.0, 1.0, 1.0, g.constant(1.0), g.constant(1.0))
    return g, prm, prm.plain_model()


@pytest.mark.parametrize("branch", [Branch.PLUS, Branch.MINUS])
def test_projection_lands_on_branch(setup, branch):
    g, prm, m = setup
    u = np.sin(np.pi * g.nodes) * (1 + 0.3 * g.nodes)
    v = project_to_nehari(g, prm, m, u, branch)
    cls = classify(g, prm, m, v)
    assert cls.branch is branch
    assert abs(cls.membership) <= 1e-10 * cls.scale
    # scale invariance of the projection
    w = project_to_nehari(g, prm, m, 7.0 * u, branch.name)
    np.testing.assert_allclose(w, v, rtol=1e-12)


def test_projection_errors(setup):
    g, prm, m = setup
    with pytest.raises(InvalidArgumentError):
        nehari_scaling(g, prm, m, np.zeros(32), Branch.PLUS)
    with pytest.raises(InvalidArgumentError):
        nehari_scaling(g, prm, m, np.ones(32), Branch.ZERO)
    big = prm.replace(lam=1e30)
    with pytest.raises(ProjectionError) as exc:
        nehari_scaling(g, big, m, np.ones(32), Branch.PLUS)
    assert exc.value.diagnosis == "no-root"
    neg = prm.replace(f=-g.constant(1.0))
    with pytest.raises(ProjectionError) as exc:
        nehari_scaling(g, neg, m, np.ones(32), Branch.PLUS)
    assert exc.value.diagnosis == "no-plus-root"


def test_profile_from_field(setup):
    g, prm, _ = setup
    u = np.sin(np.pi * g.nodes)
    prof = FiberProfile.from_field(g, prm, u)
    assert prof.A == pytest.approx(prof.B**2, rel=1e-15)
    assert prof.F == pytest.approx(np.sum(u**1.5) * g.h, rel=1e-14)


# ---------------------------------------------------------------- auxiliary maps


@pytest.mark.parametrize("kind,expected", [("M_A", 1.0), ("H_BAR", 1.0), ("H_HAT", 1.0),
                                           ("H_BAR_2P", 0.0), ("H_TILDE", 1.0), ("M_BAR", 1.0)])
def test_auxiliary_maps_frozen_at_one(kind, expected):
    prof = FiberProfile(1.0, 1.0, 1.0, 1.0, 2.0, 1.5, 3.0)
    assert auxiliary_map(kind, prof, 1.0, a=1.0, b=1.0) == pytest.approx(expected, abs=1e-15)


def test_auxiliary_h_bar_2p_frozen_and_maximizer():
    prof = FiberProfile(1.0, 1.0, 1.0, 1.0, 2.0, 1.5, 3.0)
    assert auxiliary_map(AuxKind.H_BAR_2P, prof, 2.0, b=1.0) == pytest.approx(0.25 - 2**-2.5, rel=1e-15)
    t = h_bar_2p_maximizer(prof, 1.0)
    d = 1e-6 * t
    lo, mid, hi = (auxiliary_map(AuxKind.H_BAR_2P, prof, x, b=1.0) for x in (t - d, t, t + d))
    assert mid >= lo and mid >= hi
    with pytest.raises(NoMaximizerError):
        h_bar_2p_maximizer(FiberProfile(1.0, 1.0, 1.0, 0.0, 2.0, 1.5, 3.0), 1.0)


def test_power_sum_nearly_equal_exponents():
    # exponents that collapse after shifting must not break the bracket guess
    assert power_sum_roots([(1.0, 0.0), (1.0, 1e-250), (1.0, -1.0)]) == []
