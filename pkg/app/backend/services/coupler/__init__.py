"""Self-consistent coupling of matter and light, with regime diagnostics."""

from backend.services.coupler.engine import (
    ScfOutcome,
    advance,
    initial_coupled_state,
    matter_potential,
    self_consistent_field,
    solve_light,
)
from backend.services.coupler.reduction import (
    bright_soliton,
    cubic_potential,
    reduce_low_density,
    soliton_peak_density,
    soliton_period,
)
from backend.services.coupler.regime import (
    RegimeReport,
    density_gradient_metric,
    regime_metrics,
    regime_report,
    saturation_bound,
)
from backend.services.coupler.state import CoupledState, CouplingOptions

__all__ = [
    "CoupledState",
    "CouplingOptions",
    "RegimeReport",
    "ScfOutcome",
    "advance",
    "bright_soliton",
    "cubic_potential",
    "density_gradient_metric",
    "initial_coupled_state",
    "matter_potential",
    "reduce_low_density",
    "regime_metrics",
    "regime_report",
    "saturation_bound",
    "self_consistent_field",
    "soliton_peak_density",
    "soliton_period",
    "solve_light",
]
