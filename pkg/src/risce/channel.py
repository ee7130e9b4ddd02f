"""System geometry, ground-truth channel generation and angular transforms.

All angles are normalised spatial frequencies ``u`` in ``[0, 1)``; the
array response of an ``n``-element uniform linear array is
``a_n(u)[p] = exp(-2j*pi*p*u)``. Element spacing and carrier frequency are
therefore never needed. The RIS is modelled as a linear array as well.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ShapeError

__all__ = [
    "SystemDims",
    "ChannelSet",
    "AngularDictionary",
    "GeometricPathConfig",
    "GroupingConfig",
    "cascaded_channel",
    "gen_rayleigh",
    "gen_geometric",
    "dft_dictionary",
    "steering_vector",
    "to_angular",
    "from_angular",
    "group_reduce",
    "group_expand",
    "complex_gaussian",
    "ZERO_TOL",
]

# Magnitudes below this are treated as zero when counting sparsity.
ZERO_TOL = 1e-9


def _positive_int(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class SystemDims:
    """``M`` BS antennas, ``N`` RIS elements, ``K`` single-antenna users."""

    M: int
    N: int
    K: int = 1

    def __post_init__(self):
        for name in ("M", "N", "K"):
            _positive_int(name, getattr(self, name))


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """One ground-truth channel realisation.

    Attributes
    ----------
    dims : SystemDims
    h_d : ndarray, shape (K, M)
        Direct user -> BS channels, one row per user.
    G : ndarray, shape (M, N)
        RIS -> BS channel, shared by all users.
    h_r : ndarray, shape (K, N)
        User -> RIS channels, one row per user.
    """

    dims: SystemDims
    h_d: np.ndarray
    G: np.ndarray
    h_r: np.ndarray

    def __post_init__(self):
        M, N, K = self.dims.M, self.dims.N, self.dims.K
        for name, shape in (("h_d", (K, M)), ("G", (M, N)), ("h_r", (K, N))):
            arr = np.array(getattr(self, name), dtype=np.complex128)
            if arr.shape != shape:
                raise ShapeError(f"{name} has shape {arr.shape}, expected {shape}")
            if not np.all(np.isfinite(arr)):
                raise ShapeError(f"{name} contains non-finite entries")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def cascaded(self, k=0):
        """Cascaded channel ``G diag(h_r[k])`` of user ``k``."""
        return cascaded_channel(self.G, self.h_r[k])

    def received(self, k, theta):
        """Noiseless received vector ``h_d + G diag(theta) h_r`` for user ``k``."""
        theta = np.asarray(theta)
        return self.h_d[k] + self.G @ (theta * self.h_r[k])

    def replace(self, **changes):
        fields = {"dims": self.dims, "h_d": self.h_d, "G": self.G, "h_r": self.h_r}
        fields.update(changes)
        return ChannelSet(**fields)


@dataclass(frozen=True, eq=False)
class AngularDictionary:
    """Unitary dictionaries at the BS (``U_M``) and the RIS (``U_N``)."""

    U_M: np.ndarray
    U_N: np.ndarray

    @classmethod
    def dft(cls, M, N):
        return cls(dft_dictionary(M), dft_dictionary(N))

    @property
    def M(self):
        return self.U_M.shape[0]

    @property
    def N(self):
        return self.U_N.shape[0]


@dataclass(frozen=True)
class GeometricPathConfig:
    """Path counts for the geometric (sparse multipath) channel model.

    ``gain_variance`` is the per-entry variance of every generated channel;
    at 1.0 the expected cascaded power ``E||H||_F^2 = M*N`` equals that of
    the Rayleigh model.
    """

    L_G: int = 2
    L_r: int = 2
    on_grid: bool = True
    gain_variance: float = 1.0

    def __post_init__(self):
        _positive_int("L_G", self.L_G)
        _positive_int("L_r", self.L_r)
        if not self.gain_variance > 0:
            raise ConfigError(f"gain_variance must be positive, got {self.gain_variance!r}")

    def check_capacity(self, dims):
        if self.on_grid:
            if self.L_G > min(dims.M, dims.N):
                raise ConfigError(
                    f"L_G={self.L_G} exceeds on-grid capacity min(M, N)={min(dims.M, dims.N)}"
                )
            if self.L_r > dims.N:
                raise ConfigError(f"L_r={self.L_r} exceeds on-grid capacity N={dims.N}")


@dataclass(frozen=True)
class GroupingConfig:
    """Sub-surface grouping: ``B`` adjacent RIS elements share one coefficient."""

    B: int

    def __post_init__(self):
        _positive_int("B", self.B)

    def reduced(self, N):
        if N % self.B:
            raise ConfigError(f"group size B={self.B} does not divide N={N}")
        return N // self.B


def complex_gaussian(rng, shape, variance=1.0):
    """Circularly-symmetric complex Gaussian samples with the given variance."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def cascaded_channel(G, h_r):
    """Return ``H = G @ diag(h_r)``; column ``n`` is ``G[:, n] * h_r[n]``."""
    G = np.asarray(G, dtype=np.complex128)
    h_r = np.asarray(h_r, dtype=np.complex128)
    if G.ndim != 2 or h_r.ndim != 1 or G.shape[1] != h_r.shape[0]:
        raise ShapeError(f"cannot cascade G{G.shape} with h_r{h_r.shape}")
    return G * h_r[None, :]


def gen_rayleigh(dims, rng):
    """I.i.d. unit-variance complex Gaussian channels (rich scattering)."""
    h_d = complex_gaussian(rng, (dims.K, dims.M))
    G = complex_gaussian(rng, (dims.M, dims.N))
    h_r = complex_gaussian(rng, (dims.K, dims.N))
    return ChannelSet(dims, h_d, G, h_r)


def steering_vector(n, u):
    """Array response of an ``n``-element ULA at normalised frequency ``u``."""
    return np.exp(-2j * np.pi * np.arange(n) * u)


def _draw_freqs(rng, n, count, on_grid):
    if on_grid:
        return rng.choice(n, size=count, replace=False) / n
    return rng.random(count)


def _multipath_vector(rng, n, count, on_grid, variance):
    freqs = _draw_freqs(rng, n, count, on_grid)
    gains = complex_gaussian(rng, count, variance / count)
    return sum(g * steering_vector(n, u) for g, u in zip(gains, freqs))


def gen_geometric(dims, paths, rng):
    """Sparse multipath channels built from array steering vectors.

    ``G`` is a sum of ``L_G`` rank-one BS/RIS steering outer products and
    each user's ``h_r`` a sum of ``L_r`` RIS steering vectors. The direct
    channel uses ``min(L_r, M)`` BS-side paths. In on-grid mode every
    frequency is a DFT grid point drawn without replacement, so
    ``to_angular`` of each cascaded channel has at most ``L_G * L_r``
    non-zero entries.
    """
    paths.check_capacity(dims)
    M, N, K = dims.M, dims.N, dims.K
    var = paths.gain_variance

    bs = _draw_freqs(rng, M, paths.L_G, paths.on_grid)
    ris = _draw_freqs(rng, N, paths.L_G, paths.on_grid)
    alphas = complex_gaussian(rng, paths.L_G, var / paths.L_G)
    G = np.zeros((M, N), dtype=np.complex128)
    for alpha, u, v in zip(alphas, bs, ris):
        G += alpha * np.outer(steering_vector(M, u), steering_vector(N, v))

    L_d = min(paths.L_r, M)
    h_r = np.empty((K, N), dtype=np.complex128)
    h_d = np.empty((K, M), dtype=np.complex128)
    for k in range(K):
        h_r[k] = _multipath_vector(rng, N, paths.L_r, paths.on_grid, var)
        h_d[k] = _multipath_vector(rng, M, L_d, paths.on_grid, var)
    return ChannelSet(dims, h_d, G, h_r)


def dft_dictionary(n):
    """Unitary DFT matrix, entry ``(a, b) = exp(-2j*pi*a*b/n) / sqrt(n)``."""
    _positive_int("n", n)
    a = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(a, a) / n) / np.sqrt(n)


def _check_dict(H, dictionary):
    if H.shape != (dictionary.M, dictionary.N):
        raise ShapeError(
            f"matrix of shape {H.shape} does not match dictionary "
            f"({dictionary.M}, {dictionary.N})"
        )


def to_angular(H, dictionary):
    """Angular-domain channel ``U_M^H @ H @ conj(U_N)``."""
    H = np.asarray(H, dtype=np.complex128)
    _check_dict(H, dictionary)
    return dictionary.U_M.conj().T @ H @ dictionary.U_N.conj()


def from_angular(H_ang, dictionary):
    """Inverse of :func:`to_angular`: ``U_M @ H_ang @ U_N^T``."""
    H_ang = np.asarray(H_ang, dtype=np.complex128)
    _check_dict(H_ang, dictionary)
    return dictionary.U_M @ H_ang @ dictionary.U_N.T


def group_reduce(H, grouping):
    """Sum each run of ``B`` consecutive columns of ``H``.

    For any reflection vector that is constant inside each group,
    ``H @ theta == group_reduce(H) @ theta_reduced``.
    """
    H = np.asarray(H)
    n_groups = grouping.reduced(H.shape[-1])
    return H.reshape(*H.shape[:-1], n_groups, grouping.B).sum(axis=-1)


def group_expand(theta_reduced, grouping):
    """Repeat each reduced coefficient ``B`` times along the last axis."""
    return np.repeat(np.asarray(theta_reduced), grouping.B, axis=-1)
