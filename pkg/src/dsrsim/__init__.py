"""Consensus over pinned multi-agent networks, with optional delayed-self-reinforcement acceleration.

Build a network (:mod:`dsrsim.graph`), inspect its spectrum and the largest
stable update gain (:mod:`dsrsim.spectral`), simulate the standard or
accelerated update laws (:mod:`dsrsim.dynamics`), and score settling time and
transition synchronization (:mod:`dsrsim.metrics`). :mod:`dsrsim.scenario`
drives config-file experiments; the ``dsrsim`` CLI wraps it.
"""

from .graph import (
    GraphSpec,
    GraphValidationError,
    PinnedSystem,
    build_pinned_system,
    chain_graph,
    grid_graph,
    grid_positions,
    load_graph,
    save_graph,
)
from .spectral import (
    SpectralSummary,
    eigenvalues,
    envelope_settling_steps,
    gain_bound,
    perron_spectrum,
    summarize,
)
from .dynamics import (
    SimConfig,
    SourceKind,
    SourceProfile,
    Trajectory,
    UpdateLaw,
    laplacian_potential,
    potential_gradient,
    simulate,
    source_value,
    step_accelerated,
    step_dsr,
    step_standard,
)
from .metrics import (
    FormationState,
    MetricsRecord,
    compute_metrics,
    deviation,
    integrate_positions,
    normalized_deviation,
    settling_time,
)
from .scenario import (
    RunResult,
    RunSpec,
    ScenarioConfig,
    ScenarioError,
    ScenarioResult,
    compare_report,
    load_scenario,
    resolve_scenario_path,
    run_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "GraphSpec",
    "GraphValidationError",
    "PinnedSystem",
    "build_pinned_system",
    "chain_graph",
    "grid_graph",
    "grid_positions",
    "load_graph",
    "save_graph",
    "SpectralSummary",
    "eigenvalues",
    "envelope_settling_steps",
    "gain_bound",
    "perron_spectrum",
    "summarize",
    "SimConfig",
    "SourceKind",
    "SourceProfile",
    "Trajectory",
    "UpdateLaw",
    "laplacian_potential",
    "potential_gradient",
    "simulate",
    "source_value",
    "step_accelerated",
    "step_dsr",
    "step_standard",
    "FormationState",
    "MetricsRecord",
    "compute_metrics",
    "deviation",
    "integrate_positions",
    "normalized_deviation",
    "settling_time",
    "RunResult",
    "RunSpec",
    "ScenarioConfig",
    "ScenarioError",
    "ScenarioResult",
    "compare_report",
    "load_scenario",
    "resolve_scenario_path",
    "run_scenario",
    "__version__",
]
