"""Outage analysis and Monte Carlo validation of a two-phase multi-antenna
cooperative spectrum sharing protocol over Nakagami-m fading.

A multi-antenna secondary transmitter listens to the primary message in
phase one and, on success, spends a fraction alpha of its power relaying
it in phase two while superimposing its own message on the remainder.
:mod:`.analysis` holds the closed-form outage probabilities and the
spectrum-access region, :mod:`.simulate` a deterministic rate-level Monte
Carlo counterpart, :mod:`.gammafun` the incomplete-gamma kernel both rest
on, and :mod:`.cli` the command-line harness.
"""

from .analysis import (
    AlphaStatus,
    AnalysisPoint,
    Branch,
    CriticalRegion,
    analyze,
    critical_alpha,
    critical_omega2,
    direct_outage,
    primary_outage,
    prob_direct_half,
    prob_rp_exceeds,
    prob_st_decodes,
    prob_st_fails,
    rayleigh_oracle,
    secondary_outage,
)
from .errors import ConvergenceError, DomainError
from .gammafun import (
    inv_reg_lower_gamma,
    ln_gamma,
    reg_lower_gamma,
    reg_upper_gamma,
)
from .model import (
    ChannelRealization,
    SystemConfig,
    Thresholds,
    Topology,
    derive_thresholds,
    derive_topology,
    sample_realization,
)
from .simulate import (
    CHUNK_SIZE,
    OutageEstimate,
    rates_for_realization,
    simulate_direct,
    simulate_primary,
    simulate_secondary,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaStatus",
    "AnalysisPoint",
    "Branch",
    "CHUNK_SIZE",
    "ChannelRealization",
    "ConvergenceError",
    "CriticalRegion",
    "DomainError",
    "OutageEstimate",
    "SystemConfig",
    "Thresholds",
    "Topology",
    "analyze",
    "critical_alpha",
    "critical_omega2",
    "derive_thresholds",
    "derive_topology",
    "direct_outage",
    "inv_reg_lower_gamma",
    "ln_gamma",
    "primary_outage",
    "prob_direct_half",
    "prob_rp_exceeds",
    "prob_st_decodes",
    "prob_st_fails",
    "rates_for_realization",
    "rayleigh_oracle",
    "reg_lower_gamma",
    "reg_upper_gamma",
    "sample_realization",
    "secondary_outage",
    "simulate_direct",
    "simulate_primary",
    "simulate_secondary",
]
