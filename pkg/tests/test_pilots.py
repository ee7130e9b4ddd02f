import numpy as np
import pytest

from risce.channel import ChannelSet, GroupingConfig, SystemDims, complex_gaussian, gen_rayleigh
from risce.errors import ConfigError, ShapeError
from risce.pilots import (
    NoiseConfig,
    ReflectionSchedule,
    default_dual_link_schedule,
    schedule_custom,
    schedule_dft,
    schedule_off,
    schedule_onoff,
    schedule_random_phase,
    simulate_dual_link,
    simulate_uplink,
)

NOISELESS = NoiseConfig()


def scalar_channel(h_d, G, h_r):
    return ChannelSet(SystemDims(1, 1), [[h_d]], [[G]], [[h_r]])


class TestSchedules:
    def test_onoff_small(self):
        np.testing.assert_array_equal(schedule_onoff(2).thetas, [[1, 0], [0, 1]])
        np.testing.assert_array_equal(schedule_onoff(1).thetas, [[1]])

    @pytest.mark.parametrize("N", [1, 3, 8])
    def test_onoff_identity(self, N):
        s = schedule_onoff(N)
        assert s.T == N and s.kind == "onoff"
        np.testing.assert_array_equal(s.matrix, np.eye(N))

    def test_dft_small(self):
        np.testing.assert_array_equal(schedule_dft(1).thetas, [[1]])
        assert np.max(np.abs(schedule_dft(2).thetas - np.array([[1, 1], [1, -1]]))) < 1e-15

    def test_dft_orthogonal(self):
        Theta = schedule_dft(8).matrix
        assert np.max(np.abs(Theta.conj().T @ Theta - 8 * np.eye(8))) <= 1e-12

    def test_dft_all_on(self):
        assert np.allclose(np.abs(schedule_dft(16).thetas), 1.0)

    def test_dft_partial(self):
        s = schedule_dft(8, T=3)
        np.testing.assert_array_equal(s.thetas, schedule_dft(8).thetas[:3])
        with pytest.raises(ConfigError):
            schedule_dft(4, T=5)

    def test_random_phase_unit_modulus(self, rng):
        s = schedule_random_phase(5, 7, rng)
        assert np.max(np.abs(np.abs(s.thetas) - 1)) <= 1e-12

    def test_random_phase_deterministic(self):
        a = schedule_random_phase(4, 6, np.random.default_rng(1))
        b = schedule_random_phase(4, 6, np.random.default_rng(1))
        assert a.thetas.tobytes() == b.thetas.tobytes()

    def test_random_phase_mean(self, rng):
        # 2048 uniform-phase entries: std of the mean is ~0.016
        assert abs(schedule_random_phase(64, 32, rng).thetas.mean()) < 0.05

    def test_random_phase_rejects_empty(self, rng):
        with pytest.raises(ConfigError):
            schedule_random_phase(0, 4, rng)

    def test_amplitude_bound(self):
        with pytest.raises(ConfigError):
            schedule_custom([[1.5, 0]])

    def test_off(self):
        s = schedule_off(3, 4)
        assert s.kind == "off" and not np.any(s.thetas)

    def test_dual_link_default(self):
        s = default_dual_link_schedule(4)
        assert s.T == 5
        np.testing.assert_array_equal(s.thetas[-1], np.ones(4))


class TestUplink:
    def test_scalar_arithmetic(self, rng):
        obs = simulate_uplink(scalar_channel(1, 2, 3), 0, schedule_custom([[1]]), NOISELESS, rng)
        assert obs.Y[0, 0] == 7

    def test_all_off_gives_direct(self, rng):
        chan = gen_rayleigh(SystemDims(3, 5), rng)
        obs = simulate_uplink(chan, 0, schedule_off(4, 5), NOISELESS, rng)
        np.testing.assert_array_equal(obs.Y, np.repeat(chan.h_d[0][:, None], 4, axis=1))

    def test_noiseless_matches_cascaded(self, rng):
        chan = gen_rayleigh(SystemDims(4, 6, 2), rng)
        sched = schedule_random_phase(5, 6, rng)
        obs = simulate_uplink(chan, 1, sched, NOISELESS, rng)
        for t in range(5):
            expected = chan.h_d[1] + chan.G @ np.diag(sched[t]) @ chan.h_r[1]
            assert np.max(np.abs(obs.Y[:, t] - expected)) <= 1e-12
        assert obs.user == 1

    def test_dft_without_direct_is_H_Theta(self, rng):
        chan = gen_rayleigh(SystemDims(4, 8), rng)
        chan = chan.replace(h_d=np.zeros_like(chan.h_d))
        sched = schedule_dft(8)
        obs = simulate_uplink(chan, 0, sched, NOISELESS, rng)
        assert np.max(np.abs(obs.Y - chan.cascaded() @ sched.matrix)) <= 1e-12

    def test_noise_is_additive(self, rng):
        chan = gen_rayleigh(SystemDims(3, 4), rng)
        sched = schedule_dft(4)
        clean = simulate_uplink(chan, 0, sched, NOISELESS, np.random.default_rng(9))
        noisy = simulate_uplink(chan, 0, sched, NoiseConfig(0.5), np.random.default_rng(9))
        w = complex_gaussian(np.random.default_rng(9), (3, 4), 0.5)
        assert np.max(np.abs(noisy.Y - (clean.Y + w))) <= 1e-12

    def test_noise_variance(self, rng):
        chan = gen_rayleigh(SystemDims(64, 2), rng)
        obs = simulate_uplink(chan, 0, schedule_off(2000, 2), NoiseConfig(2.0), rng)
        w = obs.Y - chan.h_d[0][:, None]
        assert abs(np.mean(np.abs(w) ** 2) / 2.0 - 1) < 0.02

    def test_shape_mismatch(self, rng):
        chan = gen_rayleigh(SystemDims(2, 4), rng)
        with pytest.raises(ShapeError):
            simulate_uplink(chan, 0, schedule_dft(3), NOISELESS, rng)

    def test_grouped_schedule(self, rng):
        g = GroupingConfig(2)
        chan = gen_rayleigh(SystemDims(3, 8), rng)
        sched = schedule_dft(4)
        obs = simulate_uplink(chan, 0, sched, NOISELESS, rng, grouping=g)
        full = schedule_custom(np.repeat(sched.thetas, 2, axis=1))
        ref = simulate_uplink(chan, 0, full, NOISELESS, rng)
        assert np.max(np.abs(obs.Y - ref.Y)) <= 1e-12
        assert obs.schedule.N == 4


class TestNoiseConfig:
    def test_rejects_negative(self):
        with pytest.raises(ConfigError):
            NoiseConfig(-1.0)
        with pytest.raises(ConfigError):
            NoiseConfig(0.0, float("nan"))


class TestDualLink:
    def test_hand_example(self, rng):
        G = np.array([[1.0], [2.0]])
        obs = simulate_dual_link(G, schedule_custom([[1], [1]]), NOISELESS, rng)
        assert obs.samples[0, 1, 0] == 2 and obs.samples[1, 0, 0] == 2
        assert np.all(np.isnan(obs.samples[[0, 1], [0, 1], :]))

    def test_direct_formula(self, rng):
        M, N = 3, 4
        G = complex_gaussian(rng, (M, N))
        sched = default_dual_link_schedule(N)
        obs = simulate_dual_link(G, sched, NOISELESS, rng)
        for m1 in range(M):
            for m2 in range(M):
                if m1 == m2:
                    continue
                for t in range(sched.T):
                    expected = G[m2] @ np.diag(sched[t]) @ G[m1]
                    assert abs(obs.samples[m1, m2, t] - expected) <= 1e-12

    def test_zero_G_leaves_interference(self, rng):
        noise = NoiseConfig(sigma2_w=0.0, sigma2_z=1.0)
        obs = simulate_dual_link(np.zeros((3, 2)), default_dual_link_schedule(2), noise, rng)
        s = obs.samples
        mask = obs.mask
        # z is constant over sub-frames
        assert np.max(np.abs(s[mask] - s[mask][:, :1])) == 0
        assert np.all(np.abs(s[mask]) > 0)

    def test_sign_flip_invariance(self, rng):
        G = complex_gaussian(rng, (4, 5))
        sched = default_dual_link_schedule(5)
        base = simulate_dual_link(G, sched, NOISELESS, rng).samples
        for n in range(5):
            Gf = G.copy()
            Gf[:, n] *= -1
            flipped = simulate_dual_link(Gf, sched, NOISELESS, rng).samples
            mask = ~np.isnan(base)
            assert np.max(np.abs(flipped[mask] - base[mask])) <= 1e-12

    def test_subframe_count(self, rng):
        with pytest.raises(ConfigError):
            simulate_dual_link(np.ones((2, 3)), schedule_dft(3), NOISELESS, rng)
        obs = simulate_dual_link(np.ones((2, 3)), schedule_dft(3), NOISELESS, rng, strict=False)
        assert obs.T == 3 and obs.slots == 6

    def test_slots(self, rng):
        obs = simulate_dual_link(np.ones((8, 32)), default_dual_link_schedule(32), NOISELESS, rng)
        assert obs.slots == 264
