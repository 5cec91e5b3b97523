import numpy as np

from qcorr.simplex import batch_nelder_mead


def rosenbrock(x):
    return np.sum(100 * (x[:, 1:] - x[:, :-1] ** 2) ** 2 + (1 - x[:, :-1]) ** 2, axis=1)


def test_rosenbrock_batch():
    x0 = np.array([[-1.2, 1.0], [0.0, 0.0], [2.0, 2.0]])
    res = batch_nelder_mead(rosenbrock, x0, step=0.5, max_iter=5000, fatol=1e-14, xatol=1e-10)
    assert res.converged.all()
    assert np.allclose(res.x, 1.0, atol=1e-5)
    assert np.all(res.fun <= 1e-10)


def test_restarts_are_independent():
    x0 = np.array([[3.0, -1.0], [-2.0, 4.0]])
    quad = lambda x: np.sum((x - np.array([1.0, 2.0])) ** 2, axis=1)
    both = batch_nelder_mead(quad, x0)
    alone = batch_nelder_mead(quad, x0[1:])
    assert np.allclose(both.x[1], alone.x[0])
    assert np.allclose(both.x, [1.0, 2.0], atol=1e-4)


def test_iteration_cap_reports_non_convergence():
    res = batch_nelder_mead(rosenbrock, np.array([[-1.2, 1.0]]), max_iter=3)
    assert not res.converged[0]
    assert res.iterations[0] == 3


def test_adaptive_in_higher_dimension():
    target = np.linspace(-1, 1, 8)
    quad = lambda x: np.sum((x - target) ** 2, axis=1)
    res = batch_nelder_mead(quad, np.zeros((2, 8)), step=0.5, max_iter=20000, adaptive=True)
    assert np.allclose(res.x, target, atol=1e-3)
