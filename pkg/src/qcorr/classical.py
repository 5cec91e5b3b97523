"""Classical correlations from local measurements.

The measure measured on side X is

    C_X(rho) = max over POVMs {E_i} on X of  S(rho_Y) - sum_i p_i S(rho_Y^i),

where Y is the other subsystem, ``p_i = Tr[(E_i)_X rho]`` and ``rho_Y^i`` is
the post-measurement state of Y for outcome i. Two searches are provided:
over orthogonal (von Neumann) measurements of a qubit, parameterised by the
Bloch angles of the measurement axis, and over rank-1 POVMs obtained from a
Naimark dilation, i.e. the first two columns of a unitary on C^n followed by
the computational-basis measurement.
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from . import linalg
from .entropy import _relative_entropy_unchecked, spectrum_entropy, von_neumann_entropy
from .simplex import batch_nelder_mead
from .errors import DimensionError, InvalidPOVMError, UnsupportedDimensionError
from .states import (
    BipartiteState,
    apply_local_channel,
    check_channel,
    two_copies,
    validate_density_matrix,
)

POVM_TOL = 1e-10
DROP_PROB = 1e-12


@dataclass(frozen=True)
class POVM:
    """Effects on one subsystem: Hermitian, PSD and summing to the identity."""

    effects: tuple

    def __post_init__(self):
        effects = tuple(linalg.as_matrix(e) for e in self.effects)
        if not effects:
            raise InvalidPOVMError("a POVM needs at least one effect")
        d = effects[0].shape[0]
        checked = []
        for e in effects:
            if e.shape != (d, d):
                raise InvalidPOVMError("effects must be square and of equal dimension")
            if np.max(np.abs(e - linalg.dagger(e))) > POVM_TOL:
                raise InvalidPOVMError("effect is not Hermitian")
            e = 0.5 * (e + linalg.dagger(e))
            if np.linalg.eigvalsh(e)[0] < -POVM_TOL:
                raise InvalidPOVMError("effect is not positive semidefinite")
            checked.append(e)
        dev = np.max(np.abs(sum(checked) - np.eye(d)))
        if dev > POVM_TOL:
            raise InvalidPOVMError(f"effects do not sum to the identity (deviation {dev:.3g})")
        object.__setattr__(self, "effects", tuple(checked))

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self):
        return len(self.effects)

    @classmethod
    def from_basis(cls, vectors) -> "POVM":
        """Projective measurement onto the columns of a unitary."""
        v = linalg.as_matrix(vectors)
        return cls(tuple(linalg.projector(v[:, i]) for i in range(v.shape[1])))


@dataclass(frozen=True)
class ConditionalEnsemble:
    """Outcome probabilities and post-measurement states of the unmeasured side."""

    probabilities: np.ndarray
    conditionals: tuple
    measured_side: str

    def average(self) -> np.ndarray:
        return sum(p * c for p, c in zip(self.probabilities, self.conditionals))


@dataclass
class ProjectiveSettings:
    """Grid-then-simplex search over qubit measurement axes."""

    grid: int = 64
    refine_starts: int = 5
    max_iter: int = 500
    ftol: float = 1e-10
    monitor: Optional[Callable[[np.ndarray], None]] = None


@dataclass
class POVMSettings:
    """Multi-restart simplex search over Naimark-dilated rank-1 POVMs."""

    outcomes: Sequence[int] = (2, 3, 4)
    restarts: int = 32
    max_iter: int = 3000
    ftol: float = 1e-10
    xtol: float = 1e-5
    seed: int = 0
    projective: ProjectiveSettings = field(default_factory=ProjectiveSettings)
    monitor: Optional[Callable[[np.ndarray], None]] = None


@dataclass
class CorrelationEstimate:
    value: float
    povm: POVM
    parameterization: str
    params: np.ndarray
    measured_side: str
    restarts: int
    converged: bool
    evaluations: int = 0


def _conditioning_tensor(state: BipartiteState, side: str) -> np.ndarray:
    """T with sigma_i = einsum('yzkj,kj->yz', T, E_i) the unnormalised conditional."""
    t = state.matrix.reshape(state.dim_a, state.dim_b, state.dim_a, state.dim_b)
    if side == "B":
        return np.einsum("ajbk->abkj", t)
    return np.einsum("jakb->abkj", t)


def condition_on_measurement(state: BipartiteState, povm: POVM, side: str) -> ConditionalEnsemble:
    """Outcome distribution and normalised conditional states of the other side.

    Outcomes with probability below 1e-12 are dropped and the remaining
    probabilities renormalised.
    """
    side = linalg.check_subsystem(side)
    if not isinstance(povm, POVM):
        povm = POVM(tuple(povm))
    if povm.dim != state.dim(side):
        raise DimensionError(
            f"POVM acts on dimension {povm.dim} but subsystem {side} has dimension {state.dim(side)}"
        )
    t = _conditioning_tensor(state, side)
    probs, conds = [], []
    for e in povm.effects:
        sigma = np.einsum("yzkj,kj->yz", t, e)
        p = float(np.trace(sigma).real)
        if p < DROP_PROB:
            continue
        probs.append(p)
        c = sigma / p
        conds.append(0.5 * (c + linalg.dagger(c)))
    probs = np.asarray(probs)
    return ConditionalEnsemble(probs / probs.sum(), tuple(conds), side)


def holevo_objective(ensemble: ConditionalEnsemble) -> float:
    """S(average) - sum_i p_i S(rho^i)."""
    avg = ensemble.average()
    s_avg = spectrum_entropy(np.linalg.eigvalsh(avg))
    residual = sum(
        p * spectrum_entropy(np.linalg.eigvalsh(c))
        for p, c in zip(ensemble.probabilities, ensemble.conditionals)
    )
    return max(0.0, s_avg - residual)


def holevo_relative_form(ensemble: ConditionalEnsemble) -> float:
    """sum_i p_i S(rho^i || average); equal to :func:`holevo_objective`."""
    avg = ensemble.average()
    return float(
        sum(
            p * _relative_entropy_unchecked(c, avg)
            for p, c in zip(ensemble.probabilities, ensemble.conditionals)
        )
    )


class MeasurementObjective:
    """Batched evaluation of the Holevo objective for one state and side.

    ``__call__`` takes effects of shape ``(..., k, d, d)`` and returns the
    objective for each leading index.
    """

    def __init__(self, state: BipartiteState, side: str, monitor=None):
        self.side = linalg.check_subsystem(side)
        self.state = state
        self.tensor = _conditioning_tensor(state, self.side)
        unmeasured = state.reduced(linalg.other_subsystem(self.side))
        self.s_unmeasured = spectrum_entropy(np.linalg.eigvalsh(unmeasured))
        self.monitor = monitor
        self.evaluations = 0

    def __call__(self, effects: np.ndarray) -> np.ndarray:
        effects = np.asarray(effects)
        if self.monitor is not None:
            self.monitor(effects.reshape(-1, *effects.shape[-3:]))
        self.evaluations += int(np.prod(effects.shape[:-3]))
        sigma = np.einsum("yzkj,...kj->...yz", self.tensor, effects)
        return self._from_conditionals(sigma)

    def rank1(self, vectors: np.ndarray) -> np.ndarray:
        """Objective for rank-1 effects |w_i><w_i| given ``vectors[..., i, :] = w_i``."""
        vectors = np.asarray(vectors)
        if self.monitor is not None:
            eff = vectors[..., :, None] * vectors[..., None, :].conj()
            self.monitor(eff.reshape(-1, *eff.shape[-3:]))
        self.evaluations += int(np.prod(vectors.shape[:-2]))
        outer = vectors[..., :, None] * vectors[..., None, :].conj()
        sigma = np.einsum("yzkj,...kj->...yz", self.tensor, outer)
        return self._from_conditionals(sigma)

    def _from_conditionals(self, sigma: np.ndarray) -> np.ndarray:
        if sigma.shape[-1] == 2:
            a = sigma[..., 0, 0].real
            d = sigma[..., 1, 1].real
            b = np.abs(sigma[..., 0, 1])
            half = 0.5 * (a + d)
            disc = np.sqrt(0.25 * (a - d) ** 2 + b * b)
            mu = np.stack([half - disc, half + disc], axis=-1)
        else:
            sigma = 0.5 * (sigma + np.conj(np.swapaxes(sigma, -1, -2)))
            mu = np.linalg.eigvalsh(sigma)
        mu = np.clip(mu, 0.0, None)
        p = mu.sum(axis=-1)
        # p_i S(sigma_i / p_i) = -sum mu log mu + p_i log p_i
        terms = -_xlog2x(mu).sum(axis=-1) + _xlog2x(p)
        terms = np.where(p > DROP_PROB, terms, 0.0)
        return self.s_unmeasured - terms.sum(axis=-1)


def _xlog2x(x: np.ndarray) -> np.ndarray:
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log2(safe), 0.0)


def qubit_axis_basis(theta, phi) -> np.ndarray:
    """Orthonormal basis (columns) with first vector along Bloch angles (theta, phi)."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    return np.array([[c, s], [e * s, -e * c]], dtype=complex)


def _axis_effects(theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    n = np.stack([c + 0j, e * s], axis=-1)
    m = np.stack([s + 0j, -e * c], axis=-1)
    vecs = np.stack([n, m], axis=-2)  # (..., 2 outcomes, 2)
    return vecs[..., :, None] * vecs[..., None, :].conj()


def _require_qubit(state: BipartiteState, side: str) -> None:
    if state.dim(side) != 2:
        raise UnsupportedDimensionError(
            f"measurement search needs a qubit on side {side}, got dimension {state.dim(side)}"
        )


def classical_correlation_projective(
    state: BipartiteState, side: str = "B", opts: ProjectiveSettings = None
) -> CorrelationEstimate:
    """Maximise the Holevo objective over orthogonal measurements of a qubit.

    A ``grid x grid`` sweep of (theta, phi) is refined by Nelder-Mead from the
    ``refine_starts`` best grid points; the first maximum found wins ties.
    """
    opts = opts or ProjectiveSettings()
    side = linalg.check_subsystem(side)
    _require_qubit(state, side)
    obj = MeasurementObjective(state, side, opts.monitor)

    thetas = np.linspace(0.0, np.pi, opts.grid)
    phis = np.linspace(0.0, 2 * np.pi, opts.grid, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    grid_x = np.column_stack([tt.ravel(), pp.ravel()])
    values = obj(_axis_effects(grid_x[:, 0], grid_x[:, 1]))
    order = np.argsort(-values, kind="stable")[: opts.refine_starts]

    res = batch_nelder_mead(
        lambda x: -obj(_axis_effects(x[:, 0], x[:, 1])),
        grid_x[order],
        step=np.pi / opts.grid,
        max_iter=opts.max_iter,
        fatol=opts.ftol,
        xatol=np.inf,
        adaptive=False,
    )
    candidates = np.concatenate([[values[order[0]]], -res.fun])
    points = np.vstack([grid_x[order[0]], res.x])
    k = int(np.argmax(candidates))
    best_x = points[k]

    return CorrelationEstimate(
        value=max(0.0, float(candidates[k])),
        povm=POVM.from_basis(qubit_axis_basis(*best_x)),
        parameterization="projective-bloch",
        params=best_x,
        measured_side=side,
        restarts=len(order),
        converged=bool(res.converged.any()),
        evaluations=obj.evaluations,
    )


def _hermitian_from_params(x: np.ndarray, n: int) -> np.ndarray:
    """Hermitian n x n generators from rows of n^2 real parameters."""
    x = np.atleast_2d(x)
    iu = np.triu_indices(n, 1)
    k = len(iu[0])
    h = np.zeros((x.shape[0], n, n), dtype=complex)
    h[:, iu[0], iu[1]] = x[:, :k] + 1j * x[:, k:2 * k]
    h = h + np.conj(np.swapaxes(h, 1, 2))
    h[:, np.arange(n), np.arange(n)] = x[:, 2 * k:]
    return h


def naimark_vectors(x: np.ndarray, n: int, d: int = 2) -> np.ndarray:
    """Vectors w_i with E_i = |w_i><w_i| = V†|i><i|V, V the first d columns of exp(iH).

    ``x`` holds rows of the n^2 real parameters of the generator H; the
    result has shape ``(batch, n, d)``.
    """
    w, v = np.linalg.eigh(_hermitian_from_params(np.asarray(x, dtype=float), n))
    u = (v * np.exp(1j * w)[:, None, :]) @ np.conj(np.swapaxes(v, 1, 2))
    return np.conj(u[:, :, :d])


def naimark_effects(x: np.ndarray, n: int, d: int = 2) -> np.ndarray:
    rows = naimark_vectors(x, n, d)[0]
    return rows[:, :, None] * rows[:, None, :].conj()


def naimark_povm(x, n: int, d: int = 2) -> POVM:
    return POVM(tuple(naimark_effects(x, n, d)))


def classical_correlation_povm(
    state: BipartiteState,
    side: str = "B",
    outcomes: Optional[int] = None,
    opts: POVMSettings = None,
) -> CorrelationEstimate:
    """Maximise the Holevo objective over rank-1 POVMs with 2 to 4 outcomes.

    ``outcomes=None`` searches every count in ``opts.outcomes`` and reports the
    best. The projective optimum is always included as a candidate, so the
    result never falls below :func:`classical_correlation_projective`.
    """
    opts = opts or POVMSettings()
    side = linalg.check_subsystem(side)
    _require_qubit(state, side)
    counts = tuple(opts.outcomes) if outcomes is None else (int(outcomes),)
    if any(n < 2 or n > 4 for n in counts):
        raise UnsupportedDimensionError(f"outcome counts must lie in 2..4, got {counts}")

    proj_opts = opts.projective
    if opts.monitor is not None and proj_opts.monitor is None:
        proj_opts = replace(proj_opts, monitor=opts.monitor)
    best = classical_correlation_projective(state, side, proj_opts)
    obj = MeasurementObjective(state, side, opts.monitor)
    rng = np.random.default_rng(opts.seed)

    for n in counts:
        x0 = rng.normal(scale=np.pi / 2, size=(opts.restarts, n * n))
        res = batch_nelder_mead(
            lambda x: -obj.rank1(naimark_vectors(x, n)),
            x0,
            step=0.3,
            max_iter=opts.max_iter,
            fatol=opts.ftol,
            xatol=opts.xtol,
            adaptive=n > 2,
        )
        k = int(np.argmax(-res.fun))
        if -res.fun[k] > best.value:
            best = CorrelationEstimate(
                value=float(-res.fun[k]),
                povm=naimark_povm(res.x[k], n),
                parameterization=f"naimark-{n}",
                params=res.x[k],
                measured_side=side,
                restarts=0,
                converged=bool(res.converged[k]),
            )

    best.restarts = opts.restarts * len(counts)
    best.evaluations = obj.evaluations + opts.projective.grid ** 2
    best.value = max(0.0, best.value)
    return best


def measurement_value(state: BipartiteState, povm: POVM, side: str) -> float:
    """Holevo objective of one fixed measurement."""
    return holevo_objective(condition_on_measurement(state, povm, side))


def helstrom_measurement(rho0, rho1, prior0: float = 0.5) -> POVM:
    """Minimum-error measurement for discriminating rho0 (prior p0) from rho1.

    Projects onto the non-negative and negative eigenspaces of
    ``p0 rho0 - (1 - p0) rho1``.
    """
    rho0 = validate_density_matrix(rho0)
    rho1 = validate_density_matrix(rho1)
    w, v = linalg.herm_eigen(prior0 * rho0 - (1 - prior0) * rho1)
    pos = v[:, w >= 0]
    neg = v[:, w < 0]
    effects = [pos @ linalg.dagger(pos), neg @ linalg.dagger(neg)]
    return POVM(tuple(e for e in effects if np.trace(e).real > 0.5))


def check_monotonicity_sample(
    state: BipartiteState,
    channel,
    side: str,
    opts: POVMSettings = None,
    measured_side: str = "A",
) -> Tuple[CorrelationEstimate, CorrelationEstimate]:
    """C before and after applying ``channel`` locally to subsystem ``side``."""
    ops = check_channel(channel, state.dim(side))
    before = classical_correlation_povm(state, measured_side, opts=opts)
    after = classical_correlation_povm(apply_local_channel(state, ops, side), measured_side, opts=opts)
    return before, after


def superadditivity_probe(
    state: BipartiteState, opts: ProjectiveSettings = None, side: str = "B", refine: bool = True
) -> Tuple[float, float]:
    """Return (2 C_p(rho), two-copy value under product projective measurements).

    The two-copy value starts from the single-copy optimal axis measured on
    both copies, which reproduces 2 C_p exactly, and is optionally refined
    by Nelder-Mead over the four Bloch angles of the two local axes.
    """
    opts = opts or ProjectiveSettings()
    side = linalg.check_subsystem(side)
    if state.dims != (2, 2):
        raise UnsupportedDimensionError("the two-copy probe needs a 2x2 state")
    single = classical_correlation_projective(state, side, opts)
    pair = two_copies(state)
    obj = MeasurementObjective(pair, side)

    def effects(x):
        e1 = _axis_effects(x[0], x[1])
        e2 = _axis_effects(x[2], x[3])
        return np.einsum("iab,jcd->ijacbd", e1, e2).reshape(4, 4, 4)

    x0 = np.concatenate([single.params, single.params])
    value = float(obj(effects(x0)))
    if refine:
        res = minimize(
            lambda x: -float(obj(effects(x))),
            x0,
            method="Nelder-Mead",
            options={"maxiter": opts.max_iter, "fatol": opts.ftol, "xatol": 1e-9},
        )
        value = max(value, -res.fun)
    return 2 * single.value, value


def conditional_entropies(state: BipartiteState, povm: POVM, side: str):
    """(S(unmeasured marginal), sum_i p_i S(rho^i)) for diagnostics."""
    ens = condition_on_measurement(state, povm, side)
    s = von_neumann_entropy(state.reduced(linalg.other_subsystem(side)))
    residual = sum(p * von_neumann_entropy(c) for p, c in zip(ens.probabilities, ens.conditionals))
    return s, residual
