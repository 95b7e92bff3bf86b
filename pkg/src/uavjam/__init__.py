"""Secrecy transmission probability of ground links protected by UAV jammers.

Analytic expressions (single jammer and PPP jammer field), a Monte Carlo
simulator of the same model, a placement optimizer and a scenario CLI.
"""
from .analytic_multi import (
    MultiJammerSettings,
    p_secrecy_multi,
    p_secrecy_multi_asymptotic,
    p_secrecy_multi_closed_form,
    secrecy_multi,
)
from .analytic_single import (
    QuadratureError,
    QuadratureSettings,
    SecrecyResult,
    p_eavesdrop,
    p_secrecy,
    p_secrecy_asymptotic,
    p_success,
    wiretap_integral,
)
from .channel import (
    EnvironmentParams,
    JammerPlacement,
    LinkEnvironment,
    NetworkConfig,
    los_probability,
    q_function,
    sample_fading,
    sinr,
)
from .montecarlo import (
    MonteCarloEstimate,
    simulate_components,
    simulate_components_multi,
    simulate_secrecy,
    simulate_secrecy_multi,
)
from .optimizer import (
    AxisGrid,
    Objective,
    OptimalPlacement,
    OptimizationError,
    PlacementSearchSpec,
    optimize_height_multi,
    optimize_placement,
)

__all__ = [name for name in dir() if not name.startswith("_")]
