import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from oracles import dirichlet_eigenvalue
from pkirchhoff import Branch, NehariProjector, NehariSolver, SobolevConstantEstimator
from pkirchhoff.errors import GateRefusal


def test_solver_fit_attributes():
    est = NehariSolver(lam=1.0, n=48).fit()
    assert est.gates_.route == "2.1"
    assert set(est.solutions_) == {"plus", "minus"}
    assert est.energies_["plus"] < 0 < est.energies_["minus"]
    assert est.result_.ok


def test_solver_params_and_clone():
    est = NehariSolver(lam=0.3, n=32, random_state=4)
    c = clone(est)
    assert c.get_params() == est.get_params()
    c.set_params(lam=0.2)
    assert c.lam == 0.2 and est.lam == 0.3


def test_solver_refuses():
    with pytest.raises(GateRefusal):
        NehariSolver(lam=1e4, n=32).fit()


def test_solver_accepts_nodal_weights():
    n = 32
    x = np.arange(1, n + 1) / (n + 1)
    est = NehariSolver(lam=0.5, n=n).fit(f=1.0 + x, g=np.ones(n))
    assert est.result_.ok


def test_projector_transform():
    rng = np.random.default_rng(0)
    X = np.sin(np.pi * np.arange(1, 33) / 33)[None, :] * (0.5 + rng.random((4, 1)))
    proj = NehariProjector(lam=1.0, branch="MINUS")
    Y = proj.fit_transform(X)
    assert Y.shape == X.shape
    # every row is a multiple of the same shape, so every projection agrees
    np.testing.assert_allclose(Y, np.repeat(Y[:1], 4, axis=0), rtol=1e-12)
    assert proj.branch_ is Branch.MINUS


def test_projector_requires_fit():
    with pytest.raises(NotFittedError):
        NehariProjector().scalings(np.ones((1, 8)))


def test_sobolev_estimator():
    est = SobolevConstantEstimator(n=64).fit()
    assert est.constant_ == pytest.approx(dirichlet_eigenvalue(1.0, 64), rel=1e-10)
    assert len(est.start_values_) == 5
