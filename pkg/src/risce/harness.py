"""Deterministic Monte-Carlo runner producing NMSE-vs-SNR reports.

Every trial draws from its own random stream, derived from
``(seed, scheme index, SNR index, trial index)`` with
:class:`numpy.random.SeedSequence`. Results are keyed and reduced in a
fixed order, so a report does not depend on how (or whether) trials were
distributed over worker processes.
"""

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import (
    AngularDictionary,
    GeometricPathConfig,
    GroupingConfig,
    SystemDims,
    gen_geometric,
    gen_rayleigh,
    group_reduce,
)
from .errors import ConfigError, EstimationError
from .estimators import (
    CoordDescentOptions,
    estimate_angular_omp,
    estimate_cascaded_dft,
    estimate_cascaded_onoff,
    estimate_direct_ls,
    estimate_lambda_multiuser,
    two_timescale_pipeline,
)
from .metrics import SCHEMES, nmse, pilot_overhead
from .pilots import (
    NoiseConfig,
    schedule_dft,
    schedule_off,
    schedule_onoff,
    schedule_random_phase,
    simulate_uplink,
)

__all__ = [
    "MODELS",
    "SNR_CONVENTION",
    "OmpConfig",
    "ExperimentConfig",
    "ReportRow",
    "NmseReport",
    "TrialOutcome",
    "run_trial",
    "run_monte_carlo",
]

log = logging.getLogger(__name__)

MODELS = ("rayleigh", "geometric")
SNR_CONVENTION = (
    "SNR = E||h_d + H theta||^2 / (M sigma2_w) with theta the all-ones "
    "(full reflection) vector; expectation over the channel model"
)
CSV_COLUMNS = (
    "scheme",
    "snr_db",
    "nmse_mean",
    "nmse_stderr",
    "trials",
    "failures",
    "raw_slots",
    "amortized_slots",
)


@dataclass(frozen=True)
class OmpConfig:
    """Measurement slots ``T`` and one stopping rule (``S`` or ``epsilon``)."""

    T: int
    S: int = None
    epsilon: float = None

    def __post_init__(self):
        if self.T < 1:
            raise ConfigError("omp.T must be >= 1")
        if (self.S is None) == (self.epsilon is None):
            raise ConfigError("omp needs exactly one of S or epsilon")
        if self.S is not None and self.S < 1:
            raise ConfigError("omp.S must be >= 1")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ConfigError("omp.epsilon must be positive")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a report.

    ``snr_db`` entries may be ``math.inf`` for a noiseless point.
    ``T_d = 0`` models a blocked direct link: generated channels get
    ``h_d = 0`` and no direct-channel slots are spent.
    """

    dims: SystemDims
    schemes: tuple
    snr_db: tuple
    trials: int
    seed: int
    model: str = "rayleigh"
    paths: GeometricPathConfig = field(default_factory=GeometricPathConfig)
    grouping: GroupingConfig = None
    T_d: int = 1
    P: int = 100
    omp: OmpConfig = None
    coord_descent: CoordDescentOptions = field(default_factory=CoordDescentOptions)

    def __post_init__(self):
        object.__setattr__(self, "schemes", tuple(self.schemes))
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.snr_db:
            raise ConfigError("snr_db must not be empty")
        if any(math.isnan(s) or s == -math.inf for s in self.snr_db):
            raise ConfigError("snr_db entries must be finite or +inf")
        if not self.schemes:
            raise ConfigError("schemes must not be empty")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ConfigError(f"unknown scheme {s!r}; choose from {', '.join(SCHEMES)}")
        if len(set(self.schemes)) != len(self.schemes):
            raise ConfigError("schemes must not repeat")
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}")
        if self.T_d < 0:
            raise ConfigError("T_d must be >= 0")
        if self.P < 1:
            raise ConfigError("P must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.model == "geometric":
            self.paths.check_capacity(self.dims)
        if self.grouping is not None:
            self.grouping.reduced(self.dims.N)
            if "two_timescale" in self.schemes:
                raise ConfigError("two_timescale does not support sub-surface grouping")
        if self.omp is None and "omp" in self.schemes:
            object.__setattr__(
                self,
                "omp",
                OmpConfig(T=max(1, self.n_eff // 4), S=self.paths.L_G * self.paths.L_r),
            )

    @property
    def n_eff(self):
        """RIS coefficients actually estimated (``N / B`` under grouping)."""
        return self.dims.N if self.grouping is None else self.grouping.reduced(self.dims.N)

    def reference_power(self):
        """Per-antenna received power for the all-ones reflection vector."""
        var = 1.0 if self.model == "rayleigh" else self.paths.gain_variance
        direct = var if self.T_d > 0 else 0.0
        return direct + self.dims.N * var * var

    def noise_variance(self, snr_db):
        if snr_db == math.inf:
            return 0.0
        return self.reference_power() / 10.0 ** (snr_db / 10.0)

    def overhead(self, scheme):
        return pilot_overhead(
            self.dims,
            scheme,
            T_d=self.T_d,
            P=self.P,
            grouping=self.grouping,
            omp_T=self.omp.T if self.omp else None,
        )

    def with_seed(self, seed):
        fields = {f: getattr(self, f) for f in self.__dataclass_fields__}
        fields["seed"] = seed
        return ExperimentConfig(**fields)

    def to_dict(self):
        d = {
            "dims": asdict(self.dims),
            "model": self.model,
            "schemes": list(self.schemes),
            "snr_db": [_json_number(s) for s in self.snr_db],
            "trials": self.trials,
            "seed": self.seed,
            "T_d": self.T_d,
            "P": self.P,
            "coord_descent": {
                k: v for k, v in asdict(self.coord_descent).items() if k != "init"
            },
        }
        if self.model == "geometric":
            d["paths"] = asdict(self.paths)
        if self.grouping is not None:
            d["grouping"] = asdict(self.grouping)
        if self.omp is not None:
            d["omp"] = {k: v for k, v in asdict(self.omp).items() if v is not None}
        return d


def _json_number(x):
    return "inf" if x == math.inf else x


@dataclass(frozen=True)
class ReportRow:
    scheme: str
    snr_db: float
    nmse_mean: float
    nmse_stderr: float
    trials: int
    failures: int
    raw_slots: int
    amortized_slots: float


def _fmt(value):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


@dataclass
class NmseReport:
    rows: list
    metadata: dict

    def row(self, scheme, snr_db):
        for r in self.rows:
            if r.scheme == scheme and r.snr_db == snr_db:
                return r
        raise KeyError((scheme, snr_db))

    def to_csv(self):
        """Flat CSV, one line per (scheme, SNR); floats with 17 significant digits."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_json(self):
        def clean(v):
            if isinstance(v, float) and (math.isnan(v) or math.isinf(v)):
                return None if math.isnan(v) else _json_number(v)
            return v

        rows = [{k: clean(v) for k, v in asdict(r).items()} for r in self.rows]
        return json.dumps({"metadata": self.metadata, "rows": rows}, indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class TrialOutcome:
    """Per-trial NMSE averaged over users, or the reason the trial failed."""

    nmse: float = None
    slots: int = 0
    failure: str = None


# -- per-scheme trial bodies ------------------------------------------------


def _generate(cfg, rng):
    if cfg.model == "rayleigh":
        chan = gen_rayleigh(cfg.dims, rng)
    else:
        chan = gen_geometric(cfg.dims, cfg.paths, rng)
    if cfg.T_d == 0:
        chan = chan.replace(h_d=np.zeros_like(chan.h_d))
    return chan


def _target(cfg, chan, k):
    H = chan.cascaded(k)
    return H if cfg.grouping is None else group_reduce(H, cfg.grouping)


def _direct(cfg, chan, k, noise, rng):
    if cfg.T_d == 0:
        return np.zeros(cfg.dims.M, dtype=np.complex128), 0
    obs = simulate_uplink(chan, k, schedule_off(cfg.T_d, cfg.n_eff), noise, rng, cfg.grouping)
    return estimate_direct_ls(obs), obs.T


def _run_single_user_ls(kind):
    make = schedule_dft if kind == "dft" else schedule_onoff
    estimate = estimate_cascaded_dft if kind == "dft" else estimate_cascaded_onoff

    def run(cfg, chan, noise, rng):
        errors, slots = [], 0
        for k in range(cfg.dims.K):
            h_d_hat, used = _direct(cfg, chan, k, noise, rng)
            obs = simulate_uplink(chan, k, make(cfg.n_eff), noise, rng, cfg.grouping)
            est = estimate(obs, h_d_hat)
            errors.append(nmse(_target(cfg, chan, k), est.H_hat))
            slots += used + obs.T
        return errors, slots, True

    return run


def _run_correlation(cfg, chan, noise, rng):
    N = cfg.n_eff
    h_d_hat, used = _direct(cfg, chan, 0, noise, rng)
    obs = simulate_uplink(chan, 0, schedule_dft(N), noise, rng, cfg.grouping)
    H1_hat = estimate_cascaded_dft(obs, h_d_hat).H_hat
    errors = [nmse(_target(cfg, chan, 0), H1_hat)]
    slots = used + obs.T
    T_k = math.ceil(N / cfg.dims.M)
    for k in range(1, cfg.dims.K):
        h_d_hat, used = _direct(cfg, chan, k, noise, rng)
        obs = simulate_uplink(chan, k, schedule_dft(N, T_k), noise, rng, cfg.grouping)
        _, est = estimate_lambda_multiuser(H1_hat, obs, h_d_hat)
        errors.append(nmse(_target(cfg, chan, k), est.H_hat))
        slots += used + obs.T
    return errors, slots, True


def _run_omp(cfg, chan, noise, rng):
    dictionary = AngularDictionary.dft(cfg.dims.M, cfg.n_eff)
    errors, slots = [], 0
    for k in range(cfg.dims.K):
        h_d_hat, used = _direct(cfg, chan, k, noise, rng)
        sched = schedule_random_phase(cfg.omp.T, cfg.n_eff, rng)
        obs = simulate_uplink(chan, k, sched, noise, rng, cfg.grouping)
        est = estimate_angular_omp(
            obs, dictionary, sparsity=cfg.omp.S, epsilon=cfg.omp.epsilon, h_d_hat=h_d_hat
        )
        errors.append(nmse(_target(cfg, chan, k), est.H_hat))
        slots += used + obs.T
    return errors, slots, True


def _run_two_timescale(cfg, chan, noise, rng):
    ests = two_timescale_pipeline(chan, noise, cfg.coord_descent, rng, T_d=cfg.T_d, P=cfg.P)
    errors = [nmse(chan.cascaded(k), e.H_hat) for k, e in enumerate(ests)]
    slots = ests[0].info["large_timescale_slots"] + sum(e.slots for e in ests)
    return errors, slots, all(e.converged for e in ests)


RUNNERS = {
    "onoff": _run_single_user_ls("onoff"),
    "dft": _run_single_user_ls("dft"),
    "correlation": _run_correlation,
    "omp": _run_omp,
    "two_timescale": _run_two_timescale,
}


def trial_rng(cfg, scheme, snr_index, trial):
    seq = np.random.SeedSequence(
        cfg.seed, spawn_key=(SCHEMES.index(scheme), snr_index, trial)
    )
    return np.random.default_rng(seq)


def run_trial(cfg, scheme, snr_index, trial):
    """Run one seeded trial; estimation errors become recorded failures."""
    rng = trial_rng(cfg, scheme, snr_index, trial)
    chan = _generate(cfg, rng)
    noise = NoiseConfig(sigma2_w=cfg.noise_variance(cfg.snr_db[snr_index]))
    try:
        errors, slots, converged = RUNNERS[scheme](cfg, chan, noise, rng)
    except EstimationError as exc:
        return TrialOutcome(failure=f"{type(exc).__name__}: {exc}")
    if not converged:
        return TrialOutcome(slots=slots, failure="coordinate descent did not converge")
    return TrialOutcome(nmse=float(np.mean(errors)), slots=slots)


def _run_chunk(args):
    cfg, scheme, snr_index, start, stop = args
    return [((scheme, snr_index, t), run_trial(cfg, scheme, snr_index, t)) for t in range(start, stop)]


def _chunks(cfg, workers):
    per_chunk = max(1, math.ceil(cfg.trials / max(1, workers)))
    for scheme in cfg.schemes:
        for i in range(len(cfg.snr_db)):
            for start in range(0, cfg.trials, per_chunk):
                yield cfg, scheme, i, start, min(cfg.trials, start + per_chunk)


def run_monte_carlo(cfg, workers=1):
    """Run every (scheme, SNR, trial) of ``cfg`` and aggregate an :class:`NmseReport`.

    ``workers > 1`` distributes trial chunks over a process pool; the
    report is identical either way.
    """
    from . import __version__

    tasks = list(_chunks(cfg, workers))
    outcomes = {}
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_run_chunk, tasks):
                outcomes.update(chunk)
    else:
        for task in tasks:
            outcomes.update(_run_chunk(task))

    rows = []
    for scheme in cfg.schemes:
        raw, amortized = cfg.overhead(scheme)
        for i, snr in enumerate(cfg.snr_db):
            values, failures = [], 0
            for t in range(cfg.trials):
                out = outcomes[(scheme, i, t)]
                if out.failure is not None:
                    failures += 1
                    log.debug("trial %s/%s/%d failed: %s", scheme, snr, t, out.failure)
                    continue
                if out.slots != raw:
                    raise RuntimeError(
                        f"{scheme}: simulator used {out.slots} slots, overhead formula says {raw}"
                    )
                values.append(out.nmse)
            values = np.array(values)
            mean = float(values.mean()) if values.size else math.nan
            stderr = (
                float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else math.nan
            )
            rows.append(
                ReportRow(scheme, snr, mean, stderr, cfg.trials, failures, raw, amortized)
            )

    metadata = {
        "config": cfg.to_dict(),
        "seed": cfg.seed,
        "version": __version__,
        "snr_convention": SNR_CONVENTION,
    }
    return NmseReport(rows, metadata)
