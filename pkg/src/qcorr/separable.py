"""Relative entropy of entanglement for two qubits.

The separable set is searched through mixtures of ``K`` pure product states

    sigma = sum_k w_k |a_k b_k><a_k b_k|,   w_k = x_k^2 / sum_j x_j^2,

with each single-qubit vector given by Bloch angles. ``S(rho||sigma)`` is
convex in sigma, but not in these parameters, so the search restarts from
several structured and random points and keeps the best local minimum.
Local minimisation uses L-BFGS with the exact gradient, obtained from the
Fréchet derivative of the matrix logarithm in the eigenbasis of sigma.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from . import linalg
from .entropy import mutual_information, quantum_relative_entropy, spectrum_entropy
from .errors import UnsupportedDimensionError
from .states import BELL_BASIS, BipartiteState, schmidt_decompose

LN2 = math.log(2.0)
PPT_TOL = 1e-10
# returned instead of +inf inside the local search so line searches can back off
BARRIER_VALUE = 1e6


@dataclass
class SeparableSettings:
    components: int = 16
    restarts: int = 32
    max_iter: int = 2000
    ftol: float = 1e-13
    gtol: float = 1e-10
    seed: int = 0
    # rank-deficient inputs: weight of the entropy bonus that selects the
    # most mixed state among equally close separable states
    tie_break: float = 1e-4


@dataclass(frozen=True)
class SeparableMixture:
    weights: np.ndarray
    angles_a: np.ndarray  # (K, 2) theta, phi
    angles_b: np.ndarray

    @classmethod
    def from_params(cls, x: np.ndarray) -> "SeparableMixture":
        k = len(x) // 5
        raw, ta, pa, tb, pb = np.asarray(x, dtype=float).reshape(5, k)
        w = raw ** 2 / np.sum(raw ** 2)
        return cls(w, np.column_stack([ta, pa]), np.column_stack([tb, pb]))

    def vectors(self) -> np.ndarray:
        a = _bloch_vectors(self.angles_a[:, 0], self.angles_a[:, 1])
        b = _bloch_vectors(self.angles_b[:, 0], self.angles_b[:, 1])
        return np.einsum("ki,kj->kij", a, b).reshape(-1, 4)

    def matrix(self) -> np.ndarray:
        psi = self.vectors()
        m = np.einsum("k,ki,kj->ij", self.weights, psi, psi.conj())
        return 0.5 * (m + linalg.dagger(m))


@dataclass
class SeparableApproximation:
    sigma_star: BipartiteState
    rel_entropy: float
    restarts_used: int
    best_restart_index: int
    converged: bool
    mixture: Optional[SeparableMixture] = None


def _bloch_vectors(theta, phi) -> np.ndarray:
    return np.stack([np.cos(theta / 2) + 0j, np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)


def _bloch_derivatives(theta, phi):
    d_theta = np.stack([-0.5 * np.sin(theta / 2) + 0j, 0.5 * np.exp(1j * phi) * np.cos(theta / 2)], axis=-1)
    d_phi = np.stack([np.zeros_like(theta) + 0j, 1j * np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)
    return d_theta, d_phi


def angles_of(vec) -> np.ndarray:
    """Bloch angles (theta, phi) of a single-qubit vector, ignoring global phase."""
    vec = np.asarray(vec, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    theta = 2 * np.arccos(np.clip(abs(vec[0]), 0.0, 1.0))
    phi = np.angle(vec[1]) - np.angle(vec[0]) if abs(vec[1]) > 1e-14 else 0.0
    return np.array([theta, phi])


def is_ppt(state: BipartiteState, tol: float = PPT_TOL) -> bool:
    """Positive partial transpose; for two qubits this is separability."""
    pt = linalg.partial_transpose(state.matrix, state.dim_a, state.dim_b, "B")
    return bool(np.linalg.eigvalsh(0.5 * (pt + linalg.dagger(pt)))[0] >= -tol)


def bell_weights(rho) -> np.ndarray:
    """Diagonal of rho in the Bell basis (phi+, phi-, psi+, psi-)."""
    m = rho.matrix if isinstance(rho, BipartiteState) else np.asarray(rho)
    return np.einsum("ij,ik,kj->j", BELL_BASIS.conj(), m, BELL_BASIS).real


def twirl_bell_diagonal(state: BipartiteState) -> BipartiteState:
    """Keep only the Bell-basis diagonal of a two-qubit state."""
    if state.dims != (2, 2):
        raise UnsupportedDimensionError("Bell-diagonal twirl needs a 2x2 state")
    w = bell_weights(state)
    return BipartiteState((BELL_BASIS * w) @ linalg.dagger(BELL_BASIS))


def closest_bell_diagonal_separable(state: BipartiteState):
    """Minimise S(rho||sigma) over Bell-diagonal separable sigma.

    Bell-diagonal states are separable iff every Bell weight is at most 1/2.
    The objective only sees the Bell weights r of rho, and the optimum caps
    the largest weight at 1/2 and rescales the rest. Returns ``(value, sigma)``.
    """
    r = bell_weights(state)
    r = np.clip(r, 0.0, None)
    top = int(np.argmax(r))
    if r[top] <= 0.5:
        lam = r / r.sum()
    else:
        rest = 1.0 - r[top]
        # a pure Bell state leaves the rest undetermined; take the most mixed choice
        lam = r * (0.5 / rest) if rest > 1e-12 else np.full(4, 1 / 6)
        lam[top] = 0.5
    sigma = BipartiteState((BELL_BASIS * lam) @ linalg.dagger(BELL_BASIS))
    return quantum_relative_entropy(state, sigma), sigma


class _RelEntropyObjective:
    """S(rho||sigma(x)) and its gradient for the product-mixture parameters."""

    def __init__(self, rho: np.ndarray, entropy_bonus: float = 0.0):
        self.rho = rho
        self.s_rho = spectrum_entropy(np.linalg.eigvalsh(rho))
        self.bonus = entropy_bonus

    def __call__(self, x: np.ndarray):
        k = len(x) // 5
        raw, ta, pa, tb, pb = x.reshape(5, k)
        s = np.sum(raw ** 2)
        w = raw ** 2 / s
        a = _bloch_vectors(ta, pa)
        b = _bloch_vectors(tb, pb)
        psi = np.einsum("ki,kj->kij", a, b).reshape(k, 4)
        sigma = np.einsum("k,ki,kj->ij", w, psi, psi.conj())
        sigma = 0.5 * (sigma + sigma.conj().T)
        lam, v = np.linalg.eigh(sigma)
        rho_v = v.conj().T @ self.rho @ v
        diag = rho_v.diagonal().real
        if lam[0] <= 1e-300 or np.any((lam < 1e-14) & (diag > 1e-8)):
            return BARRIER_VALUE, np.zeros_like(x)
        log_lam = np.log(lam)
        value = -self.s_rho - float(np.dot(diag, log_lam)) / LN2

        # Frechet derivative of ln at sigma: divided differences in its eigenbasis
        dl = lam[:, None] - lam[None, :]
        close = np.abs(dl) < 1e-12 * np.maximum(lam[:, None], lam[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            gamma = np.where(close, 2.0 / (lam[:, None] + lam[None, :]),
                             (log_lam[:, None] - log_lam[None, :]) / np.where(close, 1.0, dl))
        grad_sigma = -(v @ (gamma * rho_v) @ v.conj().T) / LN2

        if self.bonus:
            # -bonus * S(sigma); d S(sigma) = -Tr[(log2 sigma + 1/ln2) d sigma]
            value -= self.bonus * float(-np.dot(lam, log_lam)) / LN2
            log_sigma = (v * log_lam) @ v.conj().T
            grad_sigma = grad_sigma + self.bonus * (log_sigma + np.eye(4)) / LN2

        g_psi = psi @ grad_sigma.T  # row k is (G psi_k)^T since G is Hermitian
        c = np.einsum("ki,ki->k", psi.conj(), g_psi).real
        g_raw = (2 * raw / s) * (c - np.dot(w, c))

        da_t, da_p = _bloch_derivatives(ta, pa)
        db_t, db_p = _bloch_derivatives(tb, pb)
        d_psi = np.stack([
            np.einsum("ki,kj->kij", da_t, b),
            np.einsum("ki,kj->kij", da_p, b),
            np.einsum("ki,kj->kij", a, db_t),
            np.einsum("ki,kj->kij", a, db_p),
        ]).reshape(4, k, 4)
        g_angles = 2 * w * np.einsum("ki,mki->mk", g_psi.conj(), d_psi).real
        grad = np.concatenate([g_raw, g_angles.ravel()])
        return value, grad


def _initial_points(rho: np.ndarray, settings: SeparableSettings) -> np.ndarray:
    """Restart seeds: a dephased copy of rho mixed with I/4, I/4, then random mixtures."""
    k = settings.components
    rng = np.random.default_rng(settings.seed)
    basis = [np.array([0.0, 0.0]), np.array([np.pi, 0.0])]
    starts = []

    # (a) rho's eigenvectors cut to their Schmidt products, mixed with I/4
    lam, vecs = np.linalg.eigh(rho)
    comps = []
    for l, vec in zip(lam, vecs.T):
        if l < 1e-12:
            continue
        sd = schmidt_decompose(vec / np.linalg.norm(vec), 2, 2)
        for c, ua, ub in zip(sd.coefficients, sd.basis_a.T, sd.basis_b.T):
            if c > 1e-12:
                comps.append((0.5 * l * c * c, angles_of(ua), angles_of(ub)))
    for i in range(2):
        for j in range(2):
            comps.append((0.125, basis[i], basis[j]))
    starts.append(_pack(comps, k, rng))

    # (b) the maximally mixed state
    comps = [(0.25, basis[i], basis[j]) for i in range(2) for j in range(2)]
    starts.append(_pack(comps, k, rng))

    # (c) random mixtures
    while len(starts) < settings.restarts:
        raw = rng.uniform(0.2, 1.0, k)
        angles = np.column_stack([
            np.arccos(rng.uniform(-1, 1, (k, 2))),
            rng.uniform(0, 2 * np.pi, (k, 2)),
        ])
        starts.append(np.concatenate([raw, angles[:, 0], angles[:, 2], angles[:, 1], angles[:, 3]]))
    return np.array(starts[: settings.restarts])


def _pack(comps, k: int, rng) -> np.ndarray:
    """Parameter vector for listed (weight, angles_a, angles_b) plus small random filler."""
    comps = comps[:k]
    raw = np.full(k, 1e-2)
    ang = np.column_stack([
        np.arccos(rng.uniform(-1, 1, (k, 2))),
        rng.uniform(0, 2 * np.pi, (k, 2)),
    ])  # columns: theta_a, theta_b, phi_a, phi_b
    for i, (w, aa, ab) in enumerate(comps):
        raw[i] = math.sqrt(w)
        ang[i] = [aa[0], ab[0], aa[1], ab[1]]
    return np.concatenate([raw, ang[:, 0], ang[:, 2], ang[:, 1], ang[:, 3]])


def _local_search(objective, x0: np.ndarray, settings: SeparableSettings):
    res = minimize(
        objective,
        x0,
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": settings.max_iter, "ftol": settings.ftol, "gtol": settings.gtol},
    )
    return res


def relative_entropy_of_entanglement(
    state: BipartiteState, opts: SeparableSettings = None
) -> SeparableApproximation:
    """Minimise S(rho||sigma) over separable two-qubit sigma.

    The reported value is S(rho||sigma*) recomputed for the returned sigma*,
    so it is always an upper bound on the true minimum. For rank-deficient
    rho the minimiser need not be unique; a second pass then trades at most
    ``tie_break`` bits per bit of entropy to pick the most mixed of the
    (near) minimisers.
    """
    opts = opts or SeparableSettings()
    if state.dims != (2, 2):
        raise UnsupportedDimensionError("relative entropy of entanglement is implemented for 2x2 states")
    rho = state.matrix
    objective = _RelEntropyObjective(rho)

    best = None
    any_converged = False
    for i, x0 in enumerate(_initial_points(rho, opts)):
        res = _local_search(objective, x0, opts)
        any_converged |= bool(res.success)
        if best is None or res.fun < best[1].fun:
            best = (i, res)
    best_index, res = best
    x = res.x

    if opts.tie_break and np.linalg.eigvalsh(rho)[0] < 1e-8:
        polished = _local_search(_RelEntropyObjective(rho, opts.tie_break), x, opts)
        x = polished.x

    mixture = SeparableMixture.from_params(x)
    sigma = BipartiteState(mixture.matrix())
    value = quantum_relative_entropy(state, sigma)
    return SeparableApproximation(
        sigma_star=sigma,
        rel_entropy=value,
        restarts_used=opts.restarts,
        best_restart_index=best_index,
        converged=any_converged and math.isfinite(value),
        mixture=mixture,
    )


def classical_correlation_relent(state: BipartiteState, opts: SeparableSettings = None,
                                 approximation: SeparableApproximation = None):
    """S(sigma* || rho_A ⊗ rho_B) for the closest separable state sigma*.

    Returns ``(value, approximation)``; pass a previous approximation to
    reuse its sigma* instead of re-optimising.
    """
    approx = approximation or relative_entropy_of_entanglement(state, opts)
    value = quantum_relative_entropy(approx.sigma_star, state.product_of_marginals())
    return value, approx


def correlation_deficit(state: BipartiteState, opts: SeparableSettings = None) -> float:
    """I - C_RE - E_RE."""
    approx = relative_entropy_of_entanglement(state, opts)
    c_re, _ = classical_correlation_relent(state, approximation=approx)
    return mutual_information(state) - c_re - approx.rel_entropy
