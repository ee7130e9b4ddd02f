import numpy as np

from risce.channel import SystemDims, gen_rayleigh
from risce.estimators import (
    CoordDescentOptions,
    large_timescale_slots,
    small_timescale_slots,
    two_timescale_pipeline,
)
from risce.metrics import nmse
from risce.pilots import NoiseConfig


def test_slot_counts():
    assert large_timescale_slots(8, 32) == 264
    assert small_timescale_slots(8, 32) == 5
    assert small_timescale_slots(1, 1) == 2


def test_noiseless_pipeline(rng):
    chan = gen_rayleigh(SystemDims(4, 8, 2), rng)
    ests = two_timescale_pipeline(chan, NoiseConfig(), CoordDescentOptions(), rng)
    assert len(ests) == 2
    for k, est in enumerate(ests):
        assert est.converged
        assert nmse(chan.cascaded(k), est.H_hat) <= 1e-6
        assert nmse(chan.h_d[k], est.h_d_hat) <= 1e-6
        # individual factors are only right up to column signs
        assert nmse(chan.G, est.G_hat, "column_sign") <= 1e-6


def test_slot_accounting(rng):
    chan = gen_rayleigh(SystemDims(8, 32), rng)
    (est,) = two_timescale_pipeline(chan, NoiseConfig(), rng=rng, P=100)
    assert est.info["large_timescale_slots"] == 264
    assert est.slots == 5
    assert est.info["amortized_slots"] == 7.64


def test_direct_slots_join_the_stack(rng):
    chan = gen_rayleigh(SystemDims(4, 8), rng)
    (est,) = two_timescale_pipeline(chan, NoiseConfig(), rng=rng, T_d=2)
    assert est.slots == 2 + 3
    assert nmse(chan.cascaded(), est.H_hat) <= 1e-6
