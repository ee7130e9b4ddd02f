"""Channel estimation for RIS-assisted uplinks: simulators, estimators and benchmarks."""

__version__ = "0.1.0"

from .channel import (
    AngularDictionary,
    ChannelSet,
    GeometricPathConfig,
    GroupingConfig,
    SystemDims,
    cascaded_channel,
    dft_dictionary,
    from_angular,
    gen_geometric,
    gen_rayleigh,
    group_reduce,
    to_angular,
)
from .errors import (
    ConfigError,
    DegenerateColumnError,
    EstimationError,
    IdentifiabilityError,
    RisceError,
    ScheduleMisuseError,
    ShapeError,
    UndefinedMetricError,
)
from .harness import ExperimentConfig, NmseReport, OmpConfig, run_monte_carlo
from .metrics import count_unknowns, effective_power, nmse, pilot_overhead
from .pilots import (
    NoiseConfig,
    ReflectionSchedule,
    schedule_dft,
    schedule_off,
    schedule_onoff,
    schedule_random_phase,
    simulate_dual_link,
    simulate_uplink,
)
