"""Nelder-Mead run on many starting points at once.

Each restart owns its own simplex, but every reflection, expansion,
contraction and shrink step is evaluated for all live restarts in a single
call of a vectorised objective ``f(X) -> values`` with ``X`` of shape
``(batch, n)``. Termination mirrors :func:`scipy.optimize.minimize`:
a restart stops once both the spread of its vertex values is below
``fatol`` and its vertices lie within ``xatol`` of the best one, or after
``max_iter`` iterations.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class BatchResult:
    x: np.ndarray          # (batch, n) best vertex per restart
    fun: np.ndarray        # (batch,)
    iterations: np.ndarray  # (batch,)
    converged: np.ndarray  # (batch,) bool
    evaluations: int


def _initial_simplex(x0: np.ndarray, step: float) -> np.ndarray:
    b, n = x0.shape
    sim = np.repeat(x0[:, None, :], n + 1, axis=1)
    idx = np.arange(n)
    sim[:, idx + 1, idx] += step
    return sim


def batch_nelder_mead(
    f,
    x0,
    *,
    step: float = 0.1,
    max_iter: int = 2000,
    fatol: float = 1e-10,
    xatol: float = 1e-8,
    adaptive: bool = True,
) -> BatchResult:
    """Minimise ``f`` from every row of ``x0`` with an independent simplex.

    ``adaptive`` selects the dimension-dependent coefficients of Gao and Han,
    which behave much better than the classic ones above ~5 parameters.
    """
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    batch, n = x0.shape
    if adaptive:
        alpha, gamma, rho, sigma = 1.0, 1.0 + 2.0 / n, 0.75 - 1.0 / (2 * n), 1.0 - 1.0 / n
    else:
        alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5

    sim = _initial_simplex(x0, step)
    fsim = np.asarray(f(sim.reshape(-1, n)), dtype=float).reshape(batch, n + 1)
    evals = batch * (n + 1)
    iters = np.zeros(batch, dtype=int)
    live = np.ones(batch, dtype=bool)
    converged = np.zeros(batch, dtype=bool)
    rows = np.arange(batch)

    while True:
        order = np.argsort(fsim, axis=1, kind="stable")
        sim = sim[rows[:, None], order]
        fsim = fsim[rows[:, None], order]

        spread_f = np.max(np.abs(fsim[:, 1:] - fsim[:, :1]), axis=1)
        spread_x = np.max(np.abs(sim[:, 1:] - sim[:, :1]), axis=(1, 2))
        done = (spread_f <= fatol) & (spread_x <= xatol)
        converged |= done & live
        live &= ~done & (iters < max_iter)
        act = np.flatnonzero(live)
        if act.size == 0:
            break
        iters[act] += 1

        s = sim[act]
        fs = fsim[act]
        centroid = s[:, :-1].mean(axis=1)
        worst = s[:, -1]
        xr = centroid + alpha * (centroid - worst)
        fr = np.asarray(f(xr), dtype=float)
        evals += act.size

        new_x = s[:, -1].copy()
        new_f = fs[:, -1].copy()
        shrink = np.zeros(act.size, dtype=bool)

        expand = fr < fs[:, 0]
        if expand.any():
            xe = centroid[expand] + gamma * (xr[expand] - centroid[expand])
            fe = np.asarray(f(xe), dtype=float)
            evals += int(expand.sum())
            take_e = fe < fr[expand]
            new_x[expand] = np.where(take_e[:, None], xe, xr[expand])
            new_f[expand] = np.where(take_e, fe, fr[expand])

        accept = ~expand & (fr < fs[:, -2])
        new_x[accept] = xr[accept]
        new_f[accept] = fr[accept]

        contract = ~expand & ~accept
        if contract.any():
            outside = fr[contract] < fs[contract, -1]
            c = centroid[contract]
            target = np.where(outside[:, None], xr[contract], worst[contract])
            xc = c + rho * (target - c)
            fc = np.asarray(f(xc), dtype=float)
            evals += int(contract.sum())
            bound = np.where(outside, fr[contract], fs[contract, -1])
            ok = fc <= bound
            idx = np.flatnonzero(contract)
            new_x[idx[ok]] = xc[ok]
            new_f[idx[ok]] = fc[ok]
            shrink[idx[~ok]] = True

        s[:, -1] = new_x
        fs[:, -1] = new_f
        if shrink.any():
            sh = np.flatnonzero(shrink)
            best = s[sh, :1]
            moved = best + sigma * (s[sh, 1:] - best)
            fm = np.asarray(f(moved.reshape(-1, n)), dtype=float).reshape(sh.size, n)
            evals += sh.size * n
            s[sh, 1:] = moved
            fs[sh, 1:] = fm

        sim[act] = s
        fsim[act] = fs

    best = np.argmin(fsim, axis=1)
    return BatchResult(
        x=sim[rows, best],
        fun=fsim[rows, best],
        iterations=iters,
        converged=converged,
        evaluations=evals,
    )
