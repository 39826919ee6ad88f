import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from rootseries.estimator import NewtonRootTracker, TaylorRootSeries
from rootseries.validation import check_perturbations

CUBIC = dict(gammas=[0.5], coeffs=[1.0, 0.0, 1 / 6], alpha=3.0)


def test_linear_base_predicts_exact_root():
    m = TaylorRootSeries(gammas=[0], coeffs=[1], alpha=2, order=3).fit()
    pred = m.predict([[0.1], [0.2 + 0.1j]])
    assert np.allclose(pred, [1.9, 1.8 - 0.1j], atol=1e-15)
    assert m.n_features_in_ == 1


def test_series_tracks_newton():
    X = np.array([[1e-2], [-1e-3j], [5e-4]])
    s = TaylorRootSeries(order=4, **CUBIC).fit(X).predict(X)
    t = NewtonRootTracker(**CUBIC).fit(X).predict(X)
    assert np.all(np.abs(s - t) < 1e-9)


def test_oracle_engine_agrees():
    params = dict(gammas=[0.5, -1 + 0.3j], coeffs=[1.0, 0.4, -0.2], alpha=1.2 + 0.4j, order=4)
    a = TaylorRootSeries(**params).fit().coefficient_table()
    b = TaylorRootSeries(engine="oracle", **params).fit().coefficient_table()
    assert a.keys() == b.keys()
    assert all(abs(a[k] - b[k]) < 1e-12 * max(1, abs(a[k])) for k in a)


def test_branch_parameter_flips_half_power_term():
    X = [[1e-3]]
    p0 = TaylorRootSeries(branch=0, order=1, **CUBIC).fit()
    p1 = TaylorRootSeries(branch=1, order=1, **CUBIC).fit()
    c0, c1 = p0.coefficient_table()[(1,)], p1.coefficient_table()[(1,)]
    assert abs(c0 + c1) < 1e-15
    assert abs((p0.predict(X) - 3) + (p1.predict(X) - 3)) < 1e-15


def test_get_params_and_clone():
    m = TaylorRootSeries(order=2, **CUBIC)
    assert m.get_params()["order"] == 2
    c = clone(m).set_params(order=5)
    assert c.order == 5 and m.order == 2


def test_unfitted_and_bad_input():
    with pytest.raises(NotFittedError):
        TaylorRootSeries(**CUBIC).predict([[0.1]])
    m = TaylorRootSeries(**CUBIC).fit()
    with pytest.raises(ValueError):
        m.predict([[0.1, 0.2]])
    with pytest.raises(ValueError):
        m.predict([[np.nan]])
    with pytest.raises(ValueError):
        TaylorRootSeries(engine="magic", **CUBIC).fit()
    with pytest.raises(ValueError):
        TaylorRootSeries(gammas=[1], coeffs=[0, 1], alpha=1).fit()


def test_tracker_marks_failures_as_nan():
    t = NewtonRootTracker(gammas=[0], coeffs=[1], alpha=2, radius=1).fit()
    out = t.predict([[0.1], [5.0]])
    assert out[0] == pytest.approx(1.9) and np.isnan(out[1])


def test_check_perturbations_shapes():
    assert check_perturbations([0.1, 0.2]).shape == (2, 1)
    assert check_perturbations([0.1, 0.2], d=2).shape == (1, 2)
    assert check_perturbations([[1, 2j]]).dtype == complex
    with pytest.raises(ValueError):
        check_perturbations(np.zeros((0, 1)))
    with pytest.raises(ValueError):
        check_perturbations([["x"]])
