"""Bipartite states: validation, the worked families, and seeded random objects.

Conventions: computational basis ordering |00>, |01>, |10>, |11> with A the
left (most significant) factor; |phi±> = (|00> ± |11>)/√2 and
|psi±> = (|01> ± |10>)/√2; |±> = (|0> ± |1>)/√2.

Randomness uses ``numpy.random.default_rng`` (PCG64) seeded explicitly, so
every random object is reproducible from its integer seed.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, NamedTuple, Sequence

import numpy as np

from . import linalg
from .errors import (
    DimensionError,
    InvalidChannelError,
    InvalidDistributionError,
    InvalidStateError,
    QCorrError,
)

STATE_TOL = 1e-10

KET0 = linalg.ket(1, 0)
KET1 = linalg.ket(0, 1)
KET_PLUS = linalg.ket(1, 1) / np.sqrt(2)
KET_MINUS = linalg.ket(1, -1) / np.sqrt(2)

PHI_PLUS = linalg.ket(1, 0, 0, 1) / np.sqrt(2)
PHI_MINUS = linalg.ket(1, 0, 0, -1) / np.sqrt(2)
PSI_PLUS = linalg.ket(0, 1, 1, 0) / np.sqrt(2)
PSI_MINUS = linalg.ket(0, 1, -1, 0) / np.sqrt(2)

# columns: phi+, phi-, psi+, psi-
BELL_BASIS = np.column_stack([PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS])


def validate_density_matrix(m, tol: float = STATE_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the symmetrised matrix.

    Raises :class:`InvalidStateError` whose ``invariant`` names the first
    violated property.
    """
    try:
        m = linalg.as_matrix(m)
    except QCorrError as exc:
        raise InvalidStateError(str(exc), invariant="finite") from exc
    if m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise InvalidStateError(f"density matrix must be square, got {m.shape}", "shape")
    dev = np.max(np.abs(m - linalg.dagger(m)))
    if dev > tol:
        raise InvalidStateError(f"not Hermitian: max |m - m†| = {dev:.3g}", "hermitian")
    m = 0.5 * (m + linalg.dagger(m))
    tr = np.trace(m).real
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"trace is {tr:.12g}, expected 1", "trace")
    lo = np.linalg.eigvalsh(m)[0]
    if lo < -tol:
        raise InvalidStateError(
            f"positivity violated: minimum eigenvalue {lo:.3g}", "positivity"
        )
    return m


@dataclass(frozen=True)
class BipartiteState:
    """A validated density matrix on a ``dim_a ⊗ dim_b`` system."""

    matrix: np.ndarray
    dim_a: int = 2
    dim_b: int = 2

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise InvalidStateError("subsystem dimensions must be positive", "shape")
        m = validate_density_matrix(self.matrix)
        n = self.dim_a * self.dim_b
        if m.shape != (n, n):
            raise InvalidStateError(
                f"matrix shape {m.shape} does not match dims ({self.dim_a}, {self.dim_b})",
                "shape",
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dims(self):
        return (self.dim_a, self.dim_b)

    def reduced(self, keep: str) -> np.ndarray:
        return linalg.partial_trace(self.matrix, self.dim_a, self.dim_b, keep)

    @property
    def rho_a(self) -> np.ndarray:
        return self.reduced("A")

    @property
    def rho_b(self) -> np.ndarray:
        return self.reduced("B")

    def dim(self, side: str) -> int:
        return self.dim_a if linalg.check_subsystem(side) == "A" else self.dim_b

    def product_of_marginals(self) -> np.ndarray:
        return np.kron(self.rho_a, self.rho_b)

    def swapped(self) -> "BipartiteState":
        """The same state with the roles of A and B exchanged."""
        t = self.matrix.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)
        m = t.transpose(1, 0, 3, 2).reshape(self.matrix.shape)
        return BipartiteState(m, self.dim_b, self.dim_a)

    def conjugated(self, unitary) -> "BipartiteState":
        u = linalg.as_matrix(unitary)
        return BipartiteState(u @ self.matrix @ linalg.dagger(u), self.dim_a, self.dim_b)


class SchmidtDecomposition(NamedTuple):
    coefficients: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray

    @property
    def rank(self) -> int:
        return int(np.sum(self.coefficients > 1e-12))

    def vector(self) -> np.ndarray:
        return np.einsum("k,ik,jk->ij", self.coefficients, self.basis_a, self.basis_b).ravel()


@dataclass(frozen=True)
class Ensemble:
    """Probabilities with matching density matrices of a single dimension."""

    probabilities: np.ndarray
    states: tuple

    def __post_init__(self):
        p = check_distribution(self.probabilities)
        states = tuple(validate_density_matrix(s) for s in self.states)
        if len(states) != len(p):
            raise DimensionError(f"{len(p)} probabilities but {len(states)} states")
        if len({s.shape for s in states}) > 1:
            raise DimensionError("ensemble members differ in dimension")
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "states", states)

    def average(self) -> np.ndarray:
        return sum(pi * s for pi, s in zip(self.probabilities, self.states))


def check_distribution(p, tol: float = STATE_TOL) -> np.ndarray:
    """Validate a probability vector; entries within -1e-12 of zero are clipped."""
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0 or not np.all(np.isfinite(p)):
        raise InvalidDistributionError("distribution must be a nonempty finite vector")
    if np.any(p < -1e-12):
        raise InvalidDistributionError(f"negative probability {p.min():.3g}")
    if abs(p.sum() - 1.0) > tol:
        raise InvalidDistributionError(f"probabilities sum to {p.sum():.12g}, expected 1")
    return np.clip(p, 0.0, None)


def _check_probability(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InvalidDistributionError(f"p must lie in [0, 1], got {p}")
    return p


def pure_state(psi, dim_a: int = 2, dim_b: int = 2) -> BipartiteState:
    psi = np.asarray(psi, dtype=complex).ravel()
    return BipartiteState(linalg.projector(psi / np.linalg.norm(psi)), dim_a, dim_b)


def product_state(rho_a, rho_b) -> BipartiteState:
    rho_a = validate_density_matrix(rho_a)
    rho_b = validate_density_matrix(rho_b)
    return BipartiteState(np.kron(rho_a, rho_b), rho_a.shape[0], rho_b.shape[0])


def make_bell_mixture(p: float) -> BipartiteState:
    """p|phi+><phi+| + (1-p)|phi-><phi-|."""
    p = _check_probability(p)
    m = p * linalg.projector(PHI_PLUS) + (1 - p) * linalg.projector(PHI_MINUS)
    return BipartiteState(m)


def make_werner(p: float) -> BipartiteState:
    """p|phi+><phi+| + (1-p) I/4; singlet fraction f = (3p+1)/4."""
    p = _check_probability(p)
    return BipartiteState(p * linalg.projector(PHI_PLUS) + (1 - p) * np.eye(4) / 4)


def make_nonorthogonal_separable(p: float) -> BipartiteState:
    """p|00><00| + (1-p)|++><++|."""
    p = _check_probability(p)
    m = p * linalg.projector(np.kron(KET0, KET0)) + (1 - p) * linalg.projector(
        np.kron(KET_PLUS, KET_PLUS)
    )
    return BipartiteState(m)


FAMILIES = {
    "bell-mixture": make_bell_mixture,
    "werner": make_werner,
    "nonorthogonal": make_nonorthogonal_separable,
}


def make_classical_quantum(probs: Sequence[float], cond_states, dim_a: int = None) -> BipartiteState:
    """sum_i p_i |i><i|_A ⊗ rho_B^i with {|i>} the computational basis of A."""
    p = check_distribution(probs)
    cond = [validate_density_matrix(s) for s in cond_states]
    if len(cond) != len(p):
        raise DimensionError(f"{len(p)} probabilities but {len(cond)} conditional states")
    if len({c.shape for c in cond}) > 1:
        raise DimensionError("conditional states differ in dimension")
    dim_a = len(p) if dim_a is None else dim_a
    if len(p) > dim_a:
        raise DimensionError(f"{len(p)} orthonormal states do not fit in dimension {dim_a}")
    dim_b = cond[0].shape[0]
    m = np.zeros((dim_a * dim_b, dim_a * dim_b), dtype=complex)
    for i, (pi, rho) in enumerate(zip(p, cond)):
        m[i * dim_b:(i + 1) * dim_b, i * dim_b:(i + 1) * dim_b] = pi * rho
    return BipartiteState(m, dim_a, dim_b)


def schmidt_decompose(psi, dim_a: int, dim_b: int) -> SchmidtDecomposition:
    """Schmidt coefficients (descending) and local bases of a pure state vector.

    ``basis_a``/``basis_b`` hold the Schmidt vectors as columns; only the
    first ``min(dim_a, dim_b)`` terms are returned.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != dim_a * dim_b:
        raise DimensionError(f"vector of length {psi.size} does not match dims ({dim_a}, {dim_b})")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > STATE_TOL:
        raise QCorrError(f"state vector is not normalised (norm {norm:.12g})")
    u, s, vh = np.linalg.svd(psi.reshape(dim_a, dim_b))
    k = min(dim_a, dim_b)
    return SchmidtDecomposition(s[:k], u[:, :k], vh[:k, :].T)


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_unitary(dim: int, seed) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    rng = _rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(dim: int, rank: int, seed) -> np.ndarray:
    """Density matrix of exactly ``rank`` with Haar eigenvectors and flat-Dirichlet spectrum."""
    if not 1 <= rank <= dim:
        raise QCorrError(f"rank must lie in [1, {dim}], got {rank}")
    rng = _rng(seed)
    u = random_unitary(dim, rng.integers(2**63))
    w = rng.dirichlet(np.ones(rank))
    v = u[:, :rank]
    m = (v * w) @ linalg.dagger(v)
    return 0.5 * (m + linalg.dagger(m))


def random_pure_vector(dim: int, seed) -> np.ndarray:
    return random_unitary(dim, seed)[:, 0]


def random_bipartite(seed, rank: int = 4, dim_a: int = 2, dim_b: int = 2) -> BipartiteState:
    return BipartiteState(random_state(dim_a * dim_b, rank, seed), dim_a, dim_b)


def random_local_channel(dim: int, kraus_count: int, seed) -> List[np.ndarray]:
    """Kraus operators of a random CPTP map, cut from a Haar isometry."""
    if kraus_count < 1:
        raise InvalidChannelError("a channel needs at least one Kraus operator")
    u = random_unitary(dim * kraus_count, seed)
    iso = u[:, :dim]
    return [iso[j * dim:(j + 1) * dim, :] for j in range(kraus_count)]


def check_channel(kraus, dim: int = None, tol: float = STATE_TOL) -> List[np.ndarray]:
    ops = [linalg.as_matrix(k) for k in kraus]
    if not ops:
        raise InvalidChannelError("a channel needs at least one Kraus operator")
    d = ops[0].shape[1]
    if any(k.shape != (d, d) for k in ops) or (dim is not None and d != dim):
        raise InvalidChannelError("Kraus operators must be square and match the subsystem")
    completeness = sum(linalg.dagger(k) @ k for k in ops)
    dev = np.max(np.abs(completeness - np.eye(d)))
    if dev > tol:
        raise InvalidChannelError(f"Kraus operators are not trace preserving (deviation {dev:.3g})")
    return ops


def apply_channel(rho, kraus) -> np.ndarray:
    return sum(k @ rho @ linalg.dagger(k) for k in kraus)


def apply_local_channel(state: BipartiteState, kraus, side: str) -> BipartiteState:
    """Apply a channel to subsystem ``side`` of ``state``."""
    side = linalg.check_subsystem(side)
    ops = check_channel(kraus, state.dim(side))
    if side == "A":
        lifted = [np.kron(k, np.eye(state.dim_b)) for k in ops]
    else:
        lifted = [np.kron(np.eye(state.dim_a), k) for k in ops]
    return BipartiteState(apply_channel(state.matrix, lifted), state.dim_a, state.dim_b)


def depolarizing_channel(dim: int) -> List[np.ndarray]:
    """Kraus operators of the map rho -> Tr(rho) I/dim."""
    ops = []
    for i in range(dim):
        for j in range(dim):
            k = np.zeros((dim, dim), dtype=complex)
            k[i, j] = 1 / np.sqrt(dim)
            ops.append(k)
    return ops


def two_copies(state: BipartiteState) -> BipartiteState:
    """rho ⊗ rho regrouped as (A1 A2) ⊗ (B1 B2)."""
    da, db = state.dims
    t = np.kron(state.matrix, state.matrix).reshape([da, db, da, db] * 2)
    # row indices a1 b1 a2 b2 -> a1 a2 b1 b2, same for columns
    t = t.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    n = (da * db) ** 2
    return BipartiteState(t.reshape(n, n), da * da, db * db)


def load_state_json(path) -> BipartiteState:
    """Read ``{"dims": [dA, dB], "re": [[...]], "im": [[...]]}`` into a state."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise QCorrError(f"cannot read state file {path}: {exc}") from exc
    return state_from_dict(data)


def state_from_dict(data) -> BipartiteState:
    try:
        dim_a, dim_b = (int(d) for d in data["dims"])
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidStateError(f"malformed state JSON: {exc}", "shape") from exc
    if re.shape != im.shape:
        raise InvalidStateError("'re' and 'im' have different shapes", "shape")
    return BipartiteState(re + 1j * im, dim_a, dim_b)


def state_to_dict(state: BipartiteState) -> dict:
    return {
        "dims": [state.dim_a, state.dim_b],
        "re": state.matrix.real.tolist(),
        "im": state.matrix.imag.tolist(),
    }
