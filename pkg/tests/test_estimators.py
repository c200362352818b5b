import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from biodilate import BiorthogonalDilation, LCUDilation, SzNagyDilation
from biodilate.exceptions import NotAContraction, NotPowerOfTwoDim, UnnormalizedTarget
from biodilate.samplers import random_diagonalizable, random_state

from conftest import EXAMPLE_V


def test_biortho_estimator_example():
    est = BiorthogonalDilation(kappa_policy="ones").fit(EXAMPLE_V)
    assert est.n_ancillas_ == 1
    X = np.array([[1, 0], [0, 1]])
    assert est.success_probability(X) == pytest.approx([0.5, 5 / 6])
    out = est.transform(X)
    assert out.shape == (2, 2)
    assert est.score(X) == pytest.approx(1.0)


def test_get_set_params_and_clone():
    est = BiorthogonalDilation(kappa_policy="ones", tol=1e-8)
    assert est.get_params() == {"kappa_policy": "ones", "tol": 1e-8, "renormalize": False}
    est.set_params(kappa_policy="modulus")
    c = clone(est)
    assert c.kappa_policy == "modulus" and not hasattr(c, "plan_")


def test_not_fitted():
    with pytest.raises(NotFittedError):
        LCUDilation().transform([[1, 0]])


def test_renormalize_flag():
    with pytest.raises(UnnormalizedTarget):
        LCUDilation().fit(EXAMPLE_V).transform([[2, 0]])
    out = LCUDilation(renormalize=True).fit(EXAMPLE_V).transform([[2, 0]])
    assert np.allclose(np.abs(out), [[1, 0]])


def test_sznagy_estimator():
    with pytest.raises(NotAContraction):
        SzNagyDilation().fit(EXAMPLE_V)
    est = SzNagyDilation().fit(0.5 * np.eye(2))
    assert est.success_probability([[1, 0]]) == pytest.approx([0.25])


def test_operator_validation():
    with pytest.raises(NotPowerOfTwoDim):
        BiorthogonalDilation().fit(np.eye(3))


def test_fit_transform_batch(rng):
    V = random_diagonalizable(rng, 4)
    X = np.array([random_state(rng, 4) for _ in range(6)])
    for est in (BiorthogonalDilation(), LCUDilation()):
        est.fit(V)
        assert est.score(X) >= 1 - 1e-8
        assert np.allclose(est.success_probability(X), est.predicted_probability(X), atol=1e-10)
    census = BiorthogonalDilation().fit(V).census(X[0])
    assert census["counts"]["controlled-basis"] == 4
