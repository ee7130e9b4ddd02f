import numpy as np
import pytest

from risce.channel import SystemDims, complex_gaussian, gen_rayleigh
from risce.errors import ConfigError
from risce.estimators import CoordDescentOptions, dual_link_cost, estimate_g_coord_descent
from risce.metrics import nmse
from risce.pilots import NoiseConfig, default_dual_link_schedule, schedule_custom, simulate_dual_link

NOISELESS = NoiseConfig()


def dual(G, rng, schedule=None, noise=NOISELESS):
    G = np.asarray(G, dtype=complex)
    schedule = schedule or default_dual_link_schedule(G.shape[1])
    return simulate_dual_link(G, schedule, noise, rng, strict=False)


def test_two_antennas_identify_the_product_only(rng):
    G = np.array([[1.0], [2.0]])
    obs = dual(G, rng)
    res = estimate_g_coord_descent(obs, rng=rng)
    assert res.residual <= 1e-10
    assert abs(res.G[0, 0] * res.G[1, 0] - 2) <= 1e-8
    # Oracle: every [c, 2/c] fits exactly, so the column is not unique.
    for c in (1.0, -1.0, 0.5, 3j):
        assert dual_link_cost([[c], [2 / c]], obs) <= 1e-24


def test_three_antennas_identify_up_to_sign(rng):
    G = np.array([[1.0], [2.0], [3.0]])
    obs = dual(G, rng)
    res = estimate_g_coord_descent(obs, rng=rng)
    assert res.residual <= 1e-10
    # brute force over the sign ambiguity
    assert min(np.max(np.abs(res.G - s * G)) for s in (1, -1)) <= 1e-6
    assert dual_link_cost(G, obs) == 0 and dual_link_cost(-G, obs) == 0


def test_zero_channel(rng):
    res = estimate_g_coord_descent(dual(np.zeros((3, 4)), rng), rng=rng)
    assert not np.any(res.G) and res.residual == 0 and res.converged


def test_multi_start_recovers_G(rng):
    G = complex_gaussian(rng, (4, 8))
    res = estimate_g_coord_descent(dual(G, rng), CoordDescentOptions(restarts=5), rng)
    assert min(res.restart_residuals) <= 1e-6
    assert res.residual == min(res.restart_residuals)
    assert nmse(G, res.G, "column_sign") <= 1e-6


def test_monotone_trace(rng):
    G = complex_gaussian(rng, (4, 6))
    obs = dual(G, rng, noise=NoiseConfig(0.1, 0.05))
    res = estimate_g_coord_descent(obs, CoordDescentOptions(max_sweeps=30, restarts=2), rng, trace=True)
    for trace in res.traces:
        assert trace.size > 1
        assert np.all(np.diff(trace) <= 1e-12 * trace[:-1])


def test_reported_cost_matches_direct_evaluation(rng):
    G = complex_gaussian(rng, (4, 6))
    obs = dual(G, rng, noise=NoiseConfig(0.1))
    res = estimate_g_coord_descent(obs, CoordDescentOptions(max_sweeps=20, restarts=1), rng)
    assert res.cost == pytest.approx(dual_link_cost(res.G, obs), rel=1e-9)


def test_not_converged_is_flagged(rng):
    G = complex_gaussian(rng, (4, 8))
    res = estimate_g_coord_descent(dual(G, rng), CoordDescentOptions(max_sweeps=1, restarts=1), rng)
    assert not res.converged and res.sweeps == 1


def test_n_subframes_suffice(rng):
    # N sub-frames (no padding vector) already identify G.
    G = complex_gaussian(rng, (4, 8))
    sched = schedule_custom(default_dual_link_schedule(8).thetas[:8])
    res = estimate_g_coord_descent(dual(G, rng, sched), rng=rng)
    assert nmse(G, res.G, "column_sign") <= 1e-6


def test_noisy_estimate_is_reasonable(rng):
    G = complex_gaussian(rng, (6, 8))
    res = estimate_g_coord_descent(dual(G, rng, noise=NoiseConfig(0.01)), rng=rng)
    assert nmse(G, res.G, "column_sign") < 0.05


def test_deterministic():
    G = complex_gaussian(np.random.default_rng(0), (4, 6))
    obs = dual(G, np.random.default_rng(1), noise=NoiseConfig(0.1))
    a = estimate_g_coord_descent(obs, rng=np.random.default_rng(2))
    b = estimate_g_coord_descent(obs, rng=np.random.default_rng(2))
    assert a.G.tobytes() == b.G.tobytes()


@pytest.mark.parametrize(
    "kwargs", [dict(max_sweeps=0), dict(restarts=0), dict(rel_tol=0.0), dict(init="zeros")]
)
def test_options_validation(kwargs):
    with pytest.raises(ConfigError):
        CoordDescentOptions(**kwargs)
