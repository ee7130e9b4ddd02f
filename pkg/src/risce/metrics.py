"""Accuracy metrics and pilot-overhead arithmetic."""

import math
from fractions import Fraction

import numpy as np

from .errors import ConfigError, ShapeError, UndefinedMetricError

__all__ = [
    "SCHEMES",
    "CASCADED_SCHEMES",
    "nmse",
    "align_column_signs",
    "effective_power",
    "count_unknowns",
    "pilot_overhead",
]

# Order is part of the seeding contract: a scheme's index feeds its trial seeds.
SCHEMES = ("onoff", "dft", "correlation", "omp", "two_timescale")
CASCADED_SCHEMES = ("onoff", "dft", "omp")


def align_column_signs(H_true, H_est):
    """Flip each column of ``H_est`` by the sign that brings it closer to ``H_true``."""
    signs = np.where(np.real(np.sum(np.conj(H_est) * H_true, axis=0)) < 0, -1.0, 1.0)
    return H_est * signs[None, :]


def nmse(H_true, H_est, alignment="none"):
    """``||H_true - H_est||_F^2 / ||H_true||_F^2``.

    ``alignment="column_sign"`` first resolves the per-column sign
    ambiguity of estimates such as the dual-link ``G``.
    """
    H_true = np.asarray(H_true)
    H_est = np.asarray(H_est)
    if H_true.shape != H_est.shape:
        raise ShapeError(f"shape mismatch: {H_true.shape} vs {H_est.shape}")
    if alignment == "column_sign":
        H_est = align_column_signs(H_true, H_est)
    elif alignment != "none":
        raise ConfigError(f"unknown alignment {alignment!r}")
    ref = np.sum(np.abs(H_true) ** 2)
    if ref == 0:
        raise UndefinedMetricError("NMSE is undefined for an all-zero true channel")
    return float(np.sum(np.abs(H_true - H_est) ** 2) / ref)


def effective_power(H, theta):
    """Power ``||H theta||^2`` of the effective reflected link."""
    H = np.asarray(H)
    theta = np.asarray(theta)
    if H.ndim != 2 or theta.shape != (H.shape[1],):
        raise ShapeError(f"cannot apply theta{theta.shape} to H{H.shape}")
    v = H @ theta
    return float(np.real(np.vdot(v, v)))


def _reduced_n(dims, grouping):
    return dims.N if grouping is None else grouping.reduced(dims.N)


def count_unknowns(dims, scheme, grouping=None):
    """Channel coefficients one user's estimation must determine.

    ``correlation`` counts a non-typical user (the typical user costs
    ``M*N`` like any cascaded scheme); ``no_ris`` is the conventional
    direct-link-only baseline.
    """
    N = _reduced_n(dims, grouping)
    if scheme in CASCADED_SCHEMES:
        return dims.M * N
    if scheme == "correlation":
        return N
    if scheme == "two_timescale":
        return dims.M * dims.N + dims.M + dims.N
    if scheme == "no_ris":
        return dims.M
    raise ConfigError(f"unknown scheme {scheme!r}")


def pilot_overhead(dims, scheme, K=None, T_d=1, P=100, grouping=None, omp_T=None):
    """Pilot slots for estimating all ``K`` users once.

    Returns
    -------
    raw : int
        Slots of one full estimation session.
    amortized : float
        Slots per coherence block when large-timescale pilots are spread
        over ``P`` blocks; equal to ``raw`` for single-timescale schemes.
    """
    K = dims.K if K is None else K
    M = dims.M
    N = _reduced_n(dims, grouping)
    if K < 1 or T_d < 0 or P < 1:
        raise ConfigError(f"invalid overhead parameters K={K}, T_d={T_d}, P={P}")
    if scheme in ("onoff", "dft"):
        raw = K * (T_d + N)
    elif scheme == "correlation":
        raw = K * T_d + N + (K - 1) * math.ceil(N / M)
    elif scheme == "omp":
        if omp_T is None:
            raise ConfigError("omp overhead needs the number of measurement slots omp_T")
        raw = K * (T_d + omp_T)
    elif scheme == "two_timescale":
        if grouping is not None:
            raise ConfigError("two_timescale does not support sub-surface grouping")
        large = (dims.N + 1) * M
        small = K * (T_d + 1 + math.ceil(dims.N / M))
        return large + small, float(Fraction(large, P) + small)
    else:
        raise ConfigError(f"unknown scheme {scheme!r}")
    return raw, float(raw)
