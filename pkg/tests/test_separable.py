import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcorr.entropy import mutual_information, quantum_relative_entropy
from qcorr.separable import (
    SeparableMixture,
    SeparableSettings,
    _RelEntropyObjective,
    bell_weights,
    classical_correlation_relent,
    closest_bell_diagonal_separable,
    correlation_deficit,
    is_ppt,
    relative_entropy_of_entanglement,
    twirl_bell_diagonal,
)
from qcorr.states import (
    PHI_PLUS,
    BipartiteState,
    make_bell_mixture,
    make_nonorthogonal_separable,
    make_werner,
    product_state,
    pure_state,
    random_bipartite,
    random_state,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def xlog2x(x):
    return x * np.log2(x) if x > 0 else 0.0


def bell_ere(p):
    return 1 + xlog2x(p) + xlog2x(1 - p)


def werner_ere(p):
    f = (3 * p + 1) / 4
    return 1 + xlog2x(f) + xlog2x(1 - f)


def test_ppt_examples():
    assert not is_ppt(pure_state(PHI_PLUS))
    assert is_ppt(make_werner(0.2))
    assert not is_ppt(make_werner(0.5))
    assert is_ppt(product_state(random_state(2, 2, 1), random_state(2, 1, 2)))


@given(st.floats(min_value=0, max_value=1))
@settings(max_examples=50, deadline=None)
def test_werner_ppt_threshold(p):
    # partial transpose minimum eigenvalue is (1 - 3p)/4
    if abs(p - 1 / 3) > 1e-9:
        assert is_ppt(make_werner(p)) == (p < 1 / 3)


@given(seeds, st.integers(min_value=1, max_value=40))
@settings(max_examples=30, deadline=None)
def test_mixtures_are_valid_and_ppt(seed, k):
    x = np.random.default_rng(seed).normal(scale=2.0, size=5 * k)
    m = SeparableMixture.from_params(x)
    assert abs(m.weights.sum() - 1) <= 1e-12
    s = BipartiteState(m.matrix())
    assert is_ppt(s, tol=1e-9)


def test_objective_gradient_matches_finite_differences():
    rho = random_state(4, 4, 3)
    x = np.random.default_rng(4).normal(size=5 * 6)
    for bonus in (0.0, 1e-2):
        f = _RelEntropyObjective(rho, bonus)
        _, g = f(x)
        h = 1e-6
        fd = np.array([(f(x + h * e)[0] - f(x - h * e)[0]) / (2 * h) for e in np.eye(len(x))])
        assert np.max(np.abs(fd - g)) <= 1e-6


def test_twirl_examples():
    for s in (make_bell_mixture(0.7), make_werner(0.4)):
        assert np.linalg.norm(twirl_bell_diagonal(s).matrix - s.matrix) <= 1e-12
    zz = product_state(np.diag([1.0, 0.0]), np.diag([1.0, 0.0]))
    assert np.allclose(bell_weights(zz), [0.5, 0.5, 0, 0])


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_twirl_idempotent_and_trace_preserving(seed):
    s = random_bipartite(seed)
    t = twirl_bell_diagonal(s)
    assert np.linalg.norm(twirl_bell_diagonal(t).matrix - t.matrix) <= 1e-12
    assert abs(np.trace(t.matrix) - 1) <= 1e-12


@pytest.mark.parametrize("p", [0.5, 0.6, 0.75, 0.9, 1.0])
def test_bell_diagonal_closed_form(p):
    value, sigma = closest_bell_diagonal_separable(make_bell_mixture(p))
    assert abs(value - bell_ere(p)) <= 1e-9
    assert is_ppt(sigma)
    value, _ = closest_bell_diagonal_separable(make_werner(p))
    assert abs(value - werner_ere(p)) <= 1e-9


@pytest.mark.parametrize("p", [0.5, 0.7, 0.9, 1.0])
def test_ere_bell_mixture(p):
    approx = relative_entropy_of_entanglement(make_bell_mixture(p))
    assert abs(approx.rel_entropy - bell_ere(p)) <= 2e-3
    assert approx.rel_entropy >= bell_ere(p) - 1e-9
    assert is_ppt(approx.sigma_star, tol=1e-9)
    assert abs(quantum_relative_entropy(make_bell_mixture(p).matrix, approx.sigma_star.matrix)
               - approx.rel_entropy) <= 1e-9


@pytest.mark.parametrize("p", [0.5, 0.8, 1.0])
def test_ere_werner(p):
    approx = relative_entropy_of_entanglement(make_werner(p))
    assert abs(approx.rel_entropy - werner_ere(p)) <= 2e-3
    assert approx.converged


@pytest.mark.parametrize("p", [0.0, 0.3, 0.5, 0.8])
def test_ere_nonorthogonal_is_zero_and_cre_is_i(p):
    s = make_nonorthogonal_separable(p)
    c_re, approx = classical_correlation_relent(s)
    assert approx.rel_entropy <= 2e-4
    assert abs(c_re - mutual_information(s)) <= 2e-4


@pytest.mark.parametrize("p", [0.5, 0.75, 0.95])
def test_cre_bell_mixture_is_one(p):
    c_re, _ = classical_correlation_relent(make_bell_mixture(p))
    assert abs(c_re - 1) <= 5e-3


@pytest.mark.parametrize("p", [0.5, 0.75, 1.0])
def test_cre_werner_constant(p):
    c_re, _ = classical_correlation_relent(make_werner(p))
    assert abs(c_re - 0.2075) <= 5e-3


@pytest.mark.parametrize("seed", range(6))
def test_ere_corpus_properties(seed):
    s = random_bipartite([30, seed], rank=1 + seed % 4)
    approx = relative_entropy_of_entanglement(s)
    assert approx.rel_entropy <= mutual_information(s) + 1e-6
    if is_ppt(s):
        assert approx.rel_entropy <= 2e-4
    else:
        assert approx.rel_entropy >= 1e-4
    if np.allclose(s.matrix, twirl_bell_diagonal(s).matrix):
        assert abs(closest_bell_diagonal_separable(s)[0] - approx.rel_entropy) <= 2e-3


@pytest.mark.parametrize("state", [make_werner(0.6), make_werner(0.9), make_nonorthogonal_separable(0.4)])
def test_deficit_nonnegative(state):
    assert correlation_deficit(state) >= -1e-3


def test_deterministic_given_seed():
    s = random_bipartite(40)
    opts = SeparableSettings(restarts=4, seed=2)
    a = relative_entropy_of_entanglement(s, opts)
    b = relative_entropy_of_entanglement(s, opts)
    assert a.rel_entropy == b.rel_entropy and a.best_restart_index == b.best_restart_index
