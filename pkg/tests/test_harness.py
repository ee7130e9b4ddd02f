import json
import math

import numpy as np
import pytest

from risce.channel import GeometricPathConfig, GroupingConfig, SystemDims
from risce.errors import ConfigError
from risce.harness import CSV_COLUMNS, ExperimentConfig, OmpConfig, run_monte_carlo, run_trial


def cfg(**kw):
    base = dict(dims=SystemDims(4, 8, 2), schemes=("dft",), snr_db=(10.0,), trials=6, seed=7)
    base.update(kw)
    return ExperimentConfig(**base)


def test_deterministic():
    c = cfg(schemes=("onoff", "dft", "correlation", "omp"), snr_db=(0.0, 20.0))
    assert run_monte_carlo(c).to_csv() == run_monte_carlo(c).to_csv()


def test_serial_matches_parallel():
    c = cfg(schemes=("dft", "omp"), trials=9)
    assert run_monte_carlo(c).to_csv() == run_monte_carlo(c, workers=3).to_csv()


def test_seed_changes_results():
    a = run_monte_carlo(cfg()).rows[0].nmse_mean
    b = run_monte_carlo(cfg(seed=8)).rows[0].nmse_mean
    assert a != b


def test_noiseless_dft_is_exact():
    row = run_monte_carlo(cfg(snr_db=(math.inf,))).rows[0]
    assert row.nmse_mean <= 1e-12 and row.failures == 0


def test_nmse_falls_with_snr():
    rep = run_monte_carlo(cfg(schemes=("onoff", "dft"), snr_db=(0.0, 10.0, 20.0), trials=40))
    for scheme in ("onoff", "dft"):
        rows = [rep.row(scheme, s) for s in (0.0, 10.0, 20.0)]
        for lo, hi in zip(rows, rows[1:]):
            assert hi.nmse_mean <= lo.nmse_mean + 3 * math.hypot(lo.nmse_stderr, hi.nmse_stderr)


def test_slots_follow_formula():
    c = cfg(schemes=("onoff", "dft", "correlation", "omp", "two_timescale"), snr_db=(30.0,), trials=2)
    rep = run_monte_carlo(c)
    for r in rep.rows:
        assert (r.raw_slots, r.amortized_slots) == c.overhead(r.scheme)
    assert rep.row("correlation", 30.0).raw_slots == 2 + 8 + 2


def test_failures_are_recorded():
    # Low-rank geometric G defeats the correlation scheme at minimal slots.
    c = cfg(
        dims=SystemDims(8, 16, 2),
        model="geometric",
        paths=GeometricPathConfig(1, 1),
        schemes=("correlation",),
        snr_db=(math.inf,),
        trials=3,
    )
    row = run_monte_carlo(c).rows[0]
    assert row.failures == 3
    assert math.isnan(row.nmse_mean) and math.isnan(row.nmse_stderr)
    out = run_trial(c, "correlation", 0, 0)
    assert "IdentifiabilityError" in out.failure


def test_blocked_direct_link():
    c = cfg(T_d=0, snr_db=(math.inf,))
    row = run_monte_carlo(c).rows[0]
    assert row.raw_slots == 2 * 8 and row.nmse_mean <= 1e-12


def test_grouping_scores_reduced_channel():
    c = cfg(grouping=GroupingConfig(2), schemes=("dft", "onoff"), snr_db=(math.inf,))
    rep = run_monte_carlo(c)
    for r in rep.rows:
        assert r.nmse_mean <= 1e-12 and r.raw_slots == 2 * (1 + 4)


def test_csv_format():
    text = run_monte_carlo(cfg(snr_db=(5.0, math.inf), trials=1)).to_csv()
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3
    assert lines[1].split(",")[3] == "nan"  # one trial has no standard error
    assert lines[2].split(",")[1] == "inf"


def test_json_format():
    rep = run_monte_carlo(cfg(snr_db=(math.inf,), trials=1))
    data = json.loads(rep.to_json())
    assert data["metadata"]["seed"] == 7
    assert "snr_convention" in data["metadata"]
    assert data["rows"][0]["snr_db"] == "inf"
    assert data["rows"][0]["nmse_stderr"] is None


def test_reference_power_and_noise():
    c = cfg()
    assert c.reference_power() == 1 + 8
    assert c.noise_variance(10.0) == pytest.approx(0.9)
    assert c.noise_variance(math.inf) == 0.0
    assert cfg(T_d=0).reference_power() == 8


@pytest.mark.parametrize(
    "kw",
    [
        dict(trials=0),
        dict(snr_db=()),
        dict(snr_db=(math.nan,)),
        dict(schemes=("magic",)),
        dict(schemes=("dft", "dft")),
        dict(model="ricean"),
        dict(seed=-1),
        dict(T_d=-1),
        dict(grouping=GroupingConfig(3)),
        dict(grouping=GroupingConfig(2), schemes=("two_timescale",)),
    ],
)
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        cfg(**kw)


def test_omp_defaults_and_validation():
    c = cfg(schemes=("omp",), dims=SystemDims(8, 32))
    assert c.omp == OmpConfig(T=8, S=4)
    with pytest.raises(ConfigError):
        OmpConfig(T=4)
    with pytest.raises(ConfigError):
        OmpConfig(T=4, S=2, epsilon=0.1)
