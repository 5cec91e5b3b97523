"""Dense complex-matrix primitives.

Matrices are plain ``numpy`` complex arrays. Every function here is pure and
returns new arrays; dimensions in use never exceed 16x16, so nothing is
blocked or sparse.
"""

from typing import NamedTuple

import numpy as np

from .errors import DimensionError, NotHermitianError, QCorrError

HERMITIAN_TOL = 1e-10

SUBSYSTEMS = ("A", "B")


class HermitianEigen(NamedTuple):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex array, raising on anything else."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise QCorrError("matrix contains NaN or Inf entries")
    return arr


def dagger(m) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def check_subsystem(label: str) -> str:
    label = str(label).upper()
    if label not in SUBSYSTEMS:
        raise QCorrError(f"subsystem label must be 'A' or 'B', got {label!r}")
    return label


def other_subsystem(label: str) -> str:
    return "B" if check_subsystem(label) == "A" else "A"


def tensor(a, b) -> np.ndarray:
    """Kronecker product ``a ⊗ b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def _check_square(m: np.ndarray, dim_a: int, dim_b: int) -> None:
    n = dim_a * dim_b
    if dim_a < 1 or dim_b < 1 or m.shape != (n, n):
        raise DimensionError(
            f"matrix of shape {m.shape} does not match dims ({dim_a}, {dim_b})"
        )


def partial_trace(m, dim_a: int, dim_b: int, keep: str = "A") -> np.ndarray:
    """Reduced matrix on subsystem ``keep`` of an operator on A⊗B."""
    m = as_matrix(m)
    _check_square(m, dim_a, dim_b)
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if check_subsystem(keep) == "A":
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def partial_transpose(m, dim_a: int, dim_b: int, side: str = "B") -> np.ndarray:
    """Transpose the indices of one subsystem of an operator on A⊗B."""
    m = as_matrix(m)
    _check_square(m, dim_a, dim_b)
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if check_subsystem(side) == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(dim_a * dim_b, dim_a * dim_b)


def hermitian_part(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(m + m†)/2`` after checking that ``m`` is Hermitian within ``tol``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix of shape {m.shape} is not square")
    dev = np.max(np.abs(m - dagger(m))) if m.size else 0.0
    if dev > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max |m - m†| = {dev:.3g})")
    return 0.5 * (m + dagger(m))


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # first component above round-off made real positive, column by column
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            c = col[nz[0]]
            out[:, j] = col * (np.abs(c) / c)
    return out


def herm_eigen(m) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    Inputs within 1e-10 of Hermitian are symmetrised first. Eigenvalues come
    back ascending and each eigenvector has its first nonzero entry real and
    positive, so outputs are deterministic.
    """
    h = hermitian_part(m)
    w, v = np.linalg.eigh(h)
    return HermitianEigen(w, _fix_phases(v))


def eigvalsh(m) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (no eigenvectors)."""
    return np.linalg.eigvalsh(hermitian_part(m))


def matrix_function(m, func) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum."""
    w, v = herm_eigen(m)
    return (v * func(w)) @ dagger(v)


def ket(*amplitudes) -> np.ndarray:
    return np.asarray(amplitudes, dtype=complex)


def projector(vec) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex).ravel()
    return np.outer(vec, vec.conj())
