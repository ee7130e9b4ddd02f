"""Estimation of the RIS -> BS channel from dual-link pilots.

The samples are bilinear in ``G``:

    y[m1, m2, t] = sum_n G[m2, n] theta_t[n] G[m1, n] + z[m1, m2]

Because ``m1 != m2``, every single entry ``G[m, n]`` enters each sample
linearly, so cyclic coordinate descent can minimise the squared residual
exactly one entry at a time. The model only identifies ``G`` up to an
independent sign per column (``(-g)(-g) = g g``); with two antennas even
the per-column scale is unidentified, only the products ``G[0, n] G[1, n]``.
"""

from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..channel import complex_gaussian
from ..errors import ConfigError

__all__ = ["CoordDescentOptions", "CoordDescentResult", "estimate_g_coord_descent", "dual_link_cost"]

# Relative cost at which a restart counts as an exact fit.
EXACT_FIT = 1e-24


@dataclass(frozen=True)
class CoordDescentOptions:
    max_sweeps: int = 200
    rel_tol: float = 1e-8
    restarts: int = 5
    init: str = "random_gaussian"

    def __post_init__(self):
        if self.max_sweeps < 1:
            raise ConfigError("max_sweeps must be >= 1")
        if self.restarts < 1:
            raise ConfigError("restarts must be >= 1")
        if not self.rel_tol > 0:
            raise ConfigError("rel_tol must be positive")
        if self.init != "random_gaussian":
            raise ConfigError(f"unknown init {self.init!r}")


@dataclass(eq=False)
class CoordDescentResult:
    """Best restart of the solver.

    ``residual`` is the final cost normalised by the observed energy
    ``sum |y|^2``; ``traces`` holds, per restart, the cost after every
    coordinate update (only when tracing was requested).
    """

    G: np.ndarray
    cost: float
    residual: float
    converged: bool
    sweeps: int
    restart_residuals: list
    traces: list = field(default_factory=list)


def _observed(obs):
    mask = obs.mask
    Y = obs.samples / obs.pilots[:, None, :]
    return np.where(mask[:, :, None], Y, 0.0)


def dual_link_cost(G, obs):
    """Sum of squared residuals of ``G`` over all observed samples."""
    Y = _observed(obs)
    R = Y - kernels.dual_link_forward_numpy(np.asarray(G, dtype=np.complex128), obs.schedule.thetas)
    return float(np.sum(np.abs(R) ** 2))


def _solve_once(Y, thetas, G0, opts, energy, trace):
    G = G0.copy()
    R = Y - kernels.dual_link_forward(G, thetas)
    cost = float(np.sum(R.real**2 + R.imag**2))
    traces = [np.array([cost])] if trace else []
    converged = False
    sweeps = 0
    for sweeps in range(1, opts.max_sweeps + 1):
        prev = cost
        costs = kernels.cd_sweep(G, R, thetas, trace)
        if trace:
            traces.append(costs)
        cost = float(np.sum(R.real**2 + R.imag**2))
        if cost <= EXACT_FIT * energy or prev - cost < opts.rel_tol * prev:
            converged = True
            break
    return G, cost, converged, sweeps, (np.concatenate(traces) if trace else None)


def estimate_g_coord_descent(obs, opts=None, rng=None, trace=False):
    """Fit ``G`` to dual-link samples by multi-start cyclic coordinate descent.

    Updates run lexicographically over ``(m, n)``. A restart stops when the
    relative cost decrease over a sweep falls below ``opts.rel_tol``, when
    the cost reaches an exact fit, or after ``opts.max_sweeps`` sweeps;
    the latter leaves ``converged`` false rather than raising. Each
    restart starts from an independent complex Gaussian draw scaled to the
    energy of the samples and uses its own spawned random stream.

    Returns
    -------
    CoordDescentResult
        The restart with the lowest cost.
    """
    opts = opts or CoordDescentOptions()
    rng = np.random.default_rng() if rng is None else rng
    thetas = np.ascontiguousarray(obs.schedule.thetas)
    T, N = thetas.shape
    M = obs.M
    Y = np.ascontiguousarray(_observed(obs))
    energy = float(np.sum(np.abs(Y) ** 2))

    if energy == 0.0:
        return CoordDescentResult(
            G=np.zeros((M, N), dtype=np.complex128),
            cost=0.0,
            residual=0.0,
            converged=True,
            sweeps=0,
            restart_residuals=[0.0],
        )

    # E|y|^2 ~ N * s^4 for entries of G with variance s^2.
    n_obs = M * (M - 1) * T
    scale2 = np.sqrt(energy / n_obs / N)
    best = None
    residuals = []
    traces = []
    for stream in rng.spawn(opts.restarts):
        G0 = complex_gaussian(stream, (M, N), scale2)
        G, cost, converged, sweeps, tr = _solve_once(Y, thetas, G0, opts, energy, trace)
        residuals.append(cost / energy)
        if trace:
            traces.append(tr)
        if best is None or cost < best[1]:
            best = (G, cost, converged, sweeps)

    G, cost, converged, sweeps = best
    return CoordDescentResult(
        G=G,
        cost=cost,
        residual=cost / energy,
        converged=converged,
        sweeps=sweeps,
        restart_residuals=residuals,
        traces=traces,
    )
