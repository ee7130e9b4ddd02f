"""Channel estimators for every scheme the package simulates."""

from .base import ChannelEstimate
from .coord_descent import (
    CoordDescentOptions,
    CoordDescentResult,
    dual_link_cost,
    estimate_g_coord_descent,
)
from .ls import (
    estimate_cascaded_dft,
    estimate_cascaded_ls,
    estimate_cascaded_onoff,
    estimate_direct_ls,
    estimate_small_timescale_ls,
)
from .multiuser import estimate_lambda_multiuser
from .omp import estimate_angular_omp, omp, sensing_matrix
from .two_timescale import (
    large_timescale_slots,
    small_timescale_slots,
    two_timescale_pipeline,
)

__all__ = [
    "ChannelEstimate",
    "CoordDescentOptions",
    "CoordDescentResult",
    "dual_link_cost",
    "estimate_g_coord_descent",
    "estimate_cascaded_dft",
    "estimate_cascaded_ls",
    "estimate_cascaded_onoff",
    "estimate_direct_ls",
    "estimate_small_timescale_ls",
    "estimate_lambda_multiuser",
    "estimate_angular_omp",
    "omp",
    "sensing_matrix",
    "large_timescale_slots",
    "small_timescale_slots",
    "two_timescale_pipeline",
]
