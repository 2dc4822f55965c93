import numpy as np
import pytest

from oracles import energy_ld, fd_gradient, m_hat_ld
from pkirchhoff.errors import InvalidArgumentError, RangeError
from pkirchhoff.grid import build_grid
from pkirchhoff.kirchhoff import (KirchhoffModel, ProblemParams, Regime, Variant, classify_regime,
                                  energy, energy_gradient, m_hat, m_prime, m_value, residual_norm,
                                  residual_terms, weak_residual)

U3 = np.array([1.0, 2.0, 1.0])
# frozen by hand: L = 1, n = 3, p = 2, q = 1.5, r = 3, a = b = 1, lam = 2, f = g = 1
J3 = 72.0 - 2.0 * (2.0 + 2.0**1.5) * 0.25 / 1.5 - 2.5 / 3.0
GRAD3 = np.array([-0.75, 136.0 - 0.25 * (2 * 2.0**0.5 + 4.0), -0.75])


@pytest.fixture
def case3():
    g = build_grid(1.0, 3)
    prm = ProblemParams(2.0, 1.5, 3.0, 1.0, 1.0, 2.0, np.ones(3), np.ones(3))
    return g, prm, prm.plain_model()


def test_energy_frozen(case3):
    g, prm, m = case3
    assert energy(g, prm, m, U3) == pytest.approx(J3, rel=1e-15)


def test_gradient_frozen(case3):
    g, prm, m = case3
    np.testing.assert_allclose(energy_gradient(g, prm, m, U3), GRAD3, rtol=1e-15)
    np.testing.assert_array_equal(weak_residual(g, prm, m, U3), energy_gradient(g, prm, m, U3))


def test_zero_field(case3):
    g, prm, m = case3
    assert energy(g, prm, m, np.zeros(3)) == 0.0
    K, S = residual_terms(g, prm, m, np.zeros(3))
    assert not K.any() and not S.any()


def test_residual_norm_relative(case3):
    g, prm, m = case3
    K, S = residual_terms(g, prm, m, U3)
    expect = np.max(np.abs(K - S)) / max(1.0, np.max(np.abs(K) + np.abs(S)))
    assert residual_norm(g, prm, m, U3) == expect


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("variant", ["PLAIN", "TRUNCATED", "MODIFIED"])
def test_gradient_matches_extended_precision_fd(p, variant):
    rng = np.random.default_rng(int(10 * p))
    g = build_grid(1.0, 12)
    q, r = 0.5 * (1 + p), p * p + 0.5
    f, w = 0.5 + rng.random(12), rng.normal(size=12)
    prm = ProblemParams(p, q, r, 0.7, 1.3, 0.9, f, w)
    u = rng.choice([-1.0, 1.0], 12) * (0.2 + rng.random(12))
    B = (np.sum(np.abs(np.diff(np.r_[0, u, 0]) / g.h) ** p) * g.h)
    cut = 0.6 * B
    model = {"PLAIN": KirchhoffModel.plain(0.7, 1.3),
             "TRUNCATED": KirchhoffModel.truncated(0.7, 1.3, cut),
             "MODIFIED": KirchhoffModel.modified(0.7, 1.3, cut, q)}[variant]
    fd = fd_gradient(lambda v: energy_ld(v, 1.0, p, q, r, 0.9, f, w, variant, 0.7, 1.3, cut), u)
    np.testing.assert_allclose(energy_gradient(g, prm, model, u), fd, rtol=1e-7, atol=1e-9)


def test_m_variants_continuous_at_cut():
    p, k = 2.5, 3.0
    for m in (KirchhoffModel.truncated(0.4, 1.1, k), KirchhoffModel.modified(0.4, 1.1, k, 1.7)):
        lo, hi = k * (1 - 1e-12), k * (1 + 1e-12)
        assert m_value(m, p, lo) == pytest.approx(m_value(m, p, hi), rel=1e-10)
        assert m_hat(m, p, lo) == pytest.approx(m_hat(m, p, hi), rel=1e-10)


@pytest.mark.parametrize("variant", ["PLAIN", "TRUNCATED", "MODIFIED"])
@pytest.mark.parametrize("s", [0.3, 2.0, 9.0])
def test_m_hat_matches_oracle(variant, s):
    p, a, b, k, q = 2.5, 0.4, 1.1, 3.0, 1.7
    m = {"PLAIN": KirchhoffModel.plain(a, b), "TRUNCATED": KirchhoffModel.truncated(a, b, k),
         "MODIFIED": KirchhoffModel.modified(a, b, k, q)}[variant]
    assert m_hat(m, p, s) == pytest.approx(float(m_hat_ld(variant, a, b, p, s, k, q)), rel=1e-14)


@pytest.mark.parametrize("variant", ["PLAIN", "TRUNCATED", "MODIFIED"])
@pytest.mark.parametrize("s", [0.5, 5.0])
def test_m_prime_central_difference(variant, s):
    p, a, b, k, q = 3.0, 0.4, 1.1, 2.0, 1.7
    m = {"PLAIN": KirchhoffModel.plain(a, b), "TRUNCATED": KirchhoffModel.truncated(a, b, k),
         "MODIFIED": KirchhoffModel.modified(a, b, k, q)}[variant]
    d = 1e-6 * s
    fd = (m_value(m, p, s + d) - m_value(m, p, s - d)) / (2 * d)
    assert m_prime(m, p, s) == pytest.approx(fd, rel=1e-6, abs=1e-9)


def test_modified_singular_at_zero():
    m = KirchhoffModel.modified(1.0, 1.0, 2.0, 1.5)
    with pytest.raises(RangeError):
        m_value(m, 2.0, 0.0)
    assert m_hat(m, 2.0, 0.0) == 0.0


def test_m_domain():
    with pytest.raises(InvalidArgumentError):
        m_value(KirchhoffModel.plain(1, 1), 2.0, -1.0)


@pytest.mark.parametrize("kw", [dict(a=-1, b=1), dict(a=1, b=0), dict(a=np.inf, b=1)])
def test_model_validation(kw):
    with pytest.raises(InvalidArgumentError):
        KirchhoffModel(Variant.PLAIN, **kw)


def test_model_needs_cut():
    with pytest.raises(InvalidArgumentError):
        KirchhoffModel(Variant.TRUNCATED, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        KirchhoffModel(Variant.MODIFIED, 1.0, 1.0, 2.0)


def test_regimes():
    assert classify_regime(2.0, 5.0) is Regime.SUPER
    assert classify_regime(2.0, 4.0) is Regime.CRITICAL
    assert classify_regime(2.0, 3.0) is Regime.SUB


@pytest.mark.parametrize("pqr", [(2, 2, 3), (2, 1.5, 2), (2, 0.9, 3), (2, 2.5, 3)])
def test_params_exponent_order(pqr):
    p, q, r = pqr
    with pytest.raises(InvalidArgumentError):
        ProblemParams(p, q, r, 1, 1, 1, np.ones(3), np.ones(3))


def test_params_weight_conditions():
    prm = ProblemParams(2, 1.5, 3, 1, 1, 1, -np.ones(3), np.ones(3))
    with pytest.raises(InvalidArgumentError, match=r"\(i\)"):
        prm.require_weight_conditions()
    prm = ProblemParams(2, 1.5, 3, 1, 1, 1, np.ones(3), np.r_[0.0, -1.0, 0.0])
    with pytest.raises(InvalidArgumentError, match=r"\(ii\)"):
        prm.require_weight_conditions()
    # sign-changing weights with nontrivial positive parts are fine
    ProblemParams(2, 1.5, 3, 1, 1, 1, np.r_[1.0, -1.0, 0.0], np.r_[-2.0, 0.0, 1.0]).require_weight_conditions()


def test_energy_rejects_wrong_grid(case3):
    g, prm, m = case3
    with pytest.raises(InvalidArgumentError):
        energy(build_grid(1.0, 4), prm, m, np.ones(4))
