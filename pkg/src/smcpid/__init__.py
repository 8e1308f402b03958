"""Benchmark toolkit for sliding-mode-augmented PID speed control of a
first-order-plus-dead-time servo plant: exact-ZOH plant simulation, the
combined control law, closed-loop runs, step metrics, and a numerical
monitor for the reaching condition."""

__version__ = "0.1.0"

from .controllers import (  # noqa: F401
    PID_PRESETS,
    SMC_PRESET,
    ControllerState,
    ControlTrace,
    PidGains,
    SmcGains,
    error_derivative,
    pid_update,
    sat,
    sliding_surface,
    smc_update,
    smcpid_update,
)
from .metrics import (  # noqa: F401
    ComparisonTable,
    MetricSet,
    compare,
    run_metrics,
    step_metrics,
)
from .plant import (  # noqa: F401
    NOMINAL,
    PlantModel,
    PlantState,
    initial_state,
    perturbed,
    plant_step,
    rpm_to_volts,
    volts_to_rpm,
)
from .scenario_io import (  # noqa: F401
    ScenarioFileError,
    default_scenario_yaml,
    load_scenario,
    parse_scenario,
)
from .sim import (  # noqa: F401
    ControllerSpec,
    DisturbanceSegment,
    OpenLoop,
    ReferenceSegment,
    RunRecord,
    Scenario,
    SimulationDiverged,
    disturbance_at,
    open_loop_scenario,
    reference_at,
    run,
    step_scenario,
    sweep,
    varying_scenario,
)
from .stability import (  # noqa: F401
    StabilityReport,
    check_decrease,
    check_gain_condition,
    delta_series,
    lyapunov_v,
    s_dot_series,
    stability_report,
)
