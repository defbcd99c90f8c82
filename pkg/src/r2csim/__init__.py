"""Consensus-over-wireless simulator: analytics and Monte Carlo for the RC
(full referendum) and R2C (random representative) protocols on square-grid
TDMA networks with Rayleigh-fading links.
"""

from .analytics import (
    InfeasibleResiliencyError,
    PsiVariant,
    ReliabilityTargets,
    SizingResult,
    distortion_outage_normal,
    erf_approx,
    erf_approx_inv,
    n_alpha,
    n_beta_gamma,
    psi_broadcast,
    psi_gossip,
    r2c_latency_broadcast,
    r2c_latency_expected,
    r2c_latency_gossip_lb,
    rc_latency_broadcast,
    rc_latency_gossip_lb,
    required_validators,
    resiliency_exact,
    resiliency_normal,
    sigma_d_squared,
)
from .channel import (
    ChannelParams,
    UnattainableTargetError,
    broadcast_window,
    epsilon_gossip,
    epsilon_max,
    outage_matrix,
    outage_prob,
    slot_duration,
)
from .consensus import (
    Action,
    CommitMessage,
    Ledger,
    NodeBehavior,
    ProposalMessage,
    RoundOutcome,
    assign_roles,
    global_validate,
    local_validate,
    order_actions,
)
from .grid import GridNetwork, InvalidParameterError, PathStats, shortest_paths
from .scenario import (
    Scenario,
    dissemination_windows,
    load_scenario,
    resolve_round_config,
    scenario_from_dict,
)
from .simengine import (
    DisseminationTrace,
    MonteCarloResult,
    RoundConfig,
    TrialRecord,
    calibrate_gossip_windows,
    disseminate_broadcast,
    disseminate_gossip,
    energy_account,
    monte_carlo,
    resiliency_frequency,
    run_round,
)

__version__ = "1.0.0"

__all__ = [
    "Action",
    "ChannelParams",
    "CommitMessage",
    "DisseminationTrace",
    "GridNetwork",
    "InfeasibleResiliencyError",
    "InvalidParameterError",
    "Ledger",
    "MonteCarloResult",
    "NodeBehavior",
    "PathStats",
    "ProposalMessage",
    "PsiVariant",
    "ReliabilityTargets",
    "RoundConfig",
    "RoundOutcome",
    "Scenario",
    "SizingResult",
    "TrialRecord",
    "UnattainableTargetError",
    "assign_roles",
    "broadcast_window",
    "calibrate_gossip_windows",
    "disseminate_broadcast",
    "disseminate_gossip",
    "dissemination_windows",
    "distortion_outage_normal",
    "energy_account",
    "epsilon_gossip",
    "epsilon_max",
    "erf_approx",
    "erf_approx_inv",
    "global_validate",
    "load_scenario",
    "local_validate",
    "monte_carlo",
    "n_alpha",
    "n_beta_gamma",
    "order_actions",
    "outage_matrix",
    "outage_prob",
    "psi_broadcast",
    "psi_gossip",
    "r2c_latency_broadcast",
    "r2c_latency_expected",
    "r2c_latency_gossip_lb",
    "rc_latency_broadcast",
    "rc_latency_gossip_lb",
    "required_validators",
    "resiliency_exact",
    "resiliency_frequency",
    "resiliency_normal",
    "resolve_round_config",
    "run_round",
    "scenario_from_dict",
    "shortest_paths",
    "sigma_d_squared",
    "slot_duration",
]
