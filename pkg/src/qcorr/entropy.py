"""Classical and quantum entropies, in bits.

Infinite relative entropies are returned as ``math.inf``; callers test with
``math.isinf`` rather than comparing against a large number.
"""

import math

import numpy as np

from . import linalg
from .errors import DimensionError, InvalidDistributionError
from .states import BipartiteState, Ensemble, check_distribution, validate_density_matrix

EIG_CLIP = 1e-10
# sigma eigenvalues below this count as outside the support
SUPPORT_TOL = 1e-10
# rho weight that makes a support violation count
SUPPORT_WEIGHT = 1e-8


def _xlogx(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    nz = p > 0
    out[nz] = p[nz] * np.log2(p[nz])
    return out


def shannon_entropy(p) -> float:
    """H(p) = -sum p_i log2 p_i with 0 log 0 = 0."""
    p = check_distribution(p)
    return max(0.0, float(-_xlogx(p).sum()))


def classical_relative_entropy(p, q) -> float:
    p = check_distribution(p)
    q = check_distribution(q)
    if p.shape != q.shape:
        raise InvalidDistributionError(f"length mismatch: {p.size} vs {q.size}")
    nz = p > 0
    if np.any(q[nz] == 0):
        return math.inf
    return max(0.0, float(np.sum(p[nz] * np.log2(p[nz] / q[nz]))))


def spectrum_entropy(eigenvalues) -> float:
    """Shannon entropy of a density-matrix spectrum, clipping round-off negatives."""
    w = np.asarray(eigenvalues, dtype=float)
    w = np.where(w < 0, 0.0, w)
    return max(0.0, float(-_xlogx(w).sum()))


def von_neumann_entropy(rho) -> float:
    """S(rho) = -Tr rho log2 rho."""
    if isinstance(rho, BipartiteState):
        rho = rho.matrix
    rho = validate_density_matrix(rho)
    return spectrum_entropy(np.linalg.eigvalsh(rho))


def quantum_relative_entropy(rho, sigma) -> float:
    """S(rho||sigma) = Tr rho log2 rho - Tr rho log2 sigma.

    ``math.inf`` when rho has weight above 1e-8 on an eigenvector of sigma
    whose eigenvalue is below 1e-10.
    """
    if isinstance(rho, BipartiteState):
        rho = rho.matrix
    if isinstance(sigma, BipartiteState):
        sigma = sigma.matrix
    rho = validate_density_matrix(rho)
    sigma = validate_density_matrix(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch: {rho.shape} vs {sigma.shape}")
    return _relative_entropy_unchecked(rho, sigma)


def _relative_entropy_unchecked(rho: np.ndarray, sigma: np.ndarray) -> float:
    lam, vec = np.linalg.eigh(sigma)
    weights = np.einsum("ij,ik,kj->j", vec.conj(), rho, vec).real
    off = lam < SUPPORT_TOL
    if np.any(weights[off] > SUPPORT_WEIGHT):
        return math.inf
    cross = float(np.sum(weights[~off] * np.log2(lam[~off])))
    value = -spectrum_entropy(np.linalg.eigvalsh(rho)) - cross
    return max(0.0, value)


def mutual_information(state: BipartiteState) -> float:
    """I(A:B) = S(rho_A) + S(rho_B) - S(rho_AB)."""
    s_a = spectrum_entropy(np.linalg.eigvalsh(state.rho_a))
    s_b = spectrum_entropy(np.linalg.eigvalsh(state.rho_b))
    s_ab = spectrum_entropy(np.linalg.eigvalsh(state.matrix))
    return max(0.0, s_a + s_b - s_ab)


def entropy_decomposition_gap(ensemble: Ensemble) -> float:
    """S(sum p_i rho_i) - H(p) - sum p_i S(rho_i).

    Zero exactly when the members have mutually orthogonal supports and
    negative otherwise (bounded below by -H(p)).
    """
    avg = ensemble.average()
    residual = sum(
        pi * von_neumann_entropy(s) for pi, s in zip(ensemble.probabilities, ensemble.states)
    )
    return von_neumann_entropy(avg) - shannon_entropy(ensemble.probabilities) - residual


def binary_entropy(x: float) -> float:
    return shannon_entropy([x, 1 - x])


def log2_matrix(rho) -> np.ndarray:
    """Matrix log2 on the support; zero eigenvalues map to zero."""
    w, v = linalg.herm_eigen(rho)
    logs = np.where(w > EIG_CLIP, np.log2(np.where(w > EIG_CLIP, w, 1.0)), 0.0)
    return (v * logs) @ linalg.dagger(v)
