"""JSON fixtures for channels, estimates and observations.

Complex scalars are ``[re, im]`` pairs and matrices row-major nested
lists. A channel fixture has the top-level keys ``dims``, ``h_d``, ``G``
and ``h_r``; ``h_d`` and ``h_r`` hold one row per user.
"""

import json

import numpy as np

from .channel import ChannelSet, SystemDims
from .errors import ShapeError

__all__ = [
    "encode_complex",
    "decode_complex",
    "channel_to_dict",
    "channel_from_dict",
    "save_channel",
    "load_channel",
    "estimate_to_dict",
    "observation_to_dict",
]


def encode_complex(arr):
    """Nested lists with every complex scalar as ``[re, im]``."""
    arr = np.asarray(arr, dtype=np.complex128)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def decode_complex(data):
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise ShapeError("complex data must end in [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def channel_to_dict(chan):
    d = chan.dims
    return {
        "dims": {"M": d.M, "N": d.N, "K": d.K},
        "h_d": encode_complex(chan.h_d),
        "G": encode_complex(chan.G),
        "h_r": encode_complex(chan.h_r),
    }


def channel_from_dict(data):
    missing = {"dims", "h_d", "G", "h_r"} - set(data)
    if missing:
        raise ShapeError(f"channel fixture is missing keys {sorted(missing)}")
    dims = SystemDims(**data["dims"])
    return ChannelSet(
        dims,
        decode_complex(data["h_d"]).reshape(dims.K, dims.M),
        decode_complex(data["G"]),
        decode_complex(data["h_r"]).reshape(dims.K, dims.N),
    )


def save_channel(chan, path):
    with open(path, "w") as fh:
        json.dump(channel_to_dict(chan), fh)


def load_channel(path):
    with open(path) as fh:
        return channel_from_dict(json.load(fh))


def estimate_to_dict(est):
    out = {"scheme": est.scheme, "slots": est.slots, "converged": est.converged}
    for name in ("H_hat", "h_d_hat", "G_hat", "h_r_hat"):
        value = getattr(est, name)
        if value is not None:
            out[name] = encode_complex(value)
    return out


def observation_to_dict(obs):
    """Debug dump of a :class:`~risce.pilots.PilotObservation`."""
    return {
        "user": obs.user,
        "schedule_kind": obs.schedule.kind,
        "thetas": encode_complex(obs.schedule.thetas),
        "pilots": encode_complex(obs.pilots),
        "Y": encode_complex(obs.Y),
    }
