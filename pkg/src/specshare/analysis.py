"""Closed-form outage probabilities of the two-phase sharing protocol and
the spectrum-access region they define.

Notation used below: P(a, x) is the regularized lower incomplete gamma
function from :mod:`.gammafun`, and for link i the scaled threshold is

    x_i(rho) = m * rho / (omega_i * pp_over_sigma2),

so P(m, x_i(rho)) is the probability that the instantaneous SNR of link i
falls short of rho.  Outage expressions are composed from lower tails and
one-minus complements in a cancellation-free arrangement, so small outage
probabilities retain full relative accuracy.  The secondary relay is
assumed to operate well above the noise floor, which is the only
approximation in the primary outage formula; everything else is exact for
Nakagami-m fading.
"""

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .gammafun import inv_reg_lower_gamma, reg_lower_gamma, reg_upper_gamma
from .model import (
    SystemConfig,
    Thresholds,
    Topology,
    derive_thresholds,
    derive_topology,
)

__all__ = [
    "Branch",
    "AlphaStatus",
    "AnalysisPoint",
    "CriticalRegion",
    "scaled_threshold",
    "prob_rp_exceeds",
    "prob_st_fails",
    "prob_st_decodes",
    "prob_direct_half",
    "primary_outage",
    "direct_outage",
    "secondary_outage",
    "analyze",
    "critical_omega2",
    "critical_alpha",
    "rayleigh_oracle",
]


class Branch(Enum):
    """Which piece of the piecewise primary outage applies."""

    BELOW_ALPHA_HAT = "below_alpha_hat"
    AT_OR_ABOVE_ALPHA_HAT = "at_or_above_alpha_hat"


class AlphaStatus(Enum):
    """Feasibility of the minimum power split that helps the primary."""

    REQUIRED = "required"         # access needs alpha >= alpha_tilde
    NONE_NEEDED = "none-needed"   # every split in [0, alpha_hat) already helps
    INFEASIBLE = "infeasible"     # no split below alpha_hat reaches the direct outage


@dataclass(frozen=True)
class AnalysisPoint:
    """All closed forms evaluated at one operating point."""

    f_op: float      # primary outage under the sharing protocol
    f_os: float      # secondary outage
    p_d: float       # direct-transmission outage of the primary
    branch: Branch


@dataclass(frozen=True)
class CriticalRegion:
    """Boundary of the spectrum-access region.

    Access holds for d2 <= d2_tilde, equivalently omega2 >= omega2_tilde.
    The power-split fields are filled by :func:`critical_alpha` and left
    None by :func:`critical_omega2`; they are also None when the status is
    INFEASIBLE, since no split below alpha_hat qualifies there.
    """

    omega2_tilde: float
    d2_tilde: float
    alpha_status: AlphaStatus | None = None
    alpha_tilde: float | None = None
    chi: float | None = None
    phi: float | None = None


def scaled_threshold(rho: float, omega: float, config: SystemConfig) -> float:
    """m * rho / (omega * primary SNR): the argument handed to P(m, .)."""
    return config.m * rho / (omega * config.pp_over_sigma2)


def _residual_rho(config: SystemConfig, thresholds: Thresholds) -> float:
    # threshold left for the direct branch once the relayed term
    # alpha / (1 - alpha) is subtracted; clamped so that rounding right at
    # alpha_hat cannot push it negative
    return max(thresholds.rho1 - config.alpha / (1.0 - config.alpha), 0.0)


def prob_rp_exceeds(
    config: SystemConfig, topology: Topology, thresholds: Thresholds
) -> float:
    """Probability the combined primary rate beats its target when the
    secondary relays, identically 1 for alpha at or above alpha_hat."""
    if config.alpha >= thresholds.alpha_hat:
        return 1.0
    x = scaled_threshold(_residual_rho(config, thresholds), topology.omega1, config)
    return 1.0 - reg_lower_gamma(config.m, x)


def prob_st_fails(
    config: SystemConfig, topology: Topology, thresholds: Thresholds
) -> float:
    """Probability the multi-antenna secondary cannot decode the primary
    message in phase one."""
    shape = config.n_antennas * config.m
    return reg_lower_gamma(shape, scaled_threshold(thresholds.rho1, topology.omega2, config))


def prob_st_decodes(
    config: SystemConfig, topology: Topology, thresholds: Thresholds
) -> float:
    """Exact complement of :func:`prob_st_fails`."""
    shape = config.n_antennas * config.m
    return reg_upper_gamma(shape, scaled_threshold(thresholds.rho1, topology.omega2, config))


def prob_direct_half(
    config: SystemConfig, topology: Topology, thresholds: Thresholds
) -> float:
    """Probability the direct link alone survives the halved-rate phase."""
    x = scaled_threshold(thresholds.rho1, topology.omega1, config)
    return 1.0 - reg_lower_gamma(config.m, x)


def primary_outage(
    config: SystemConfig, topology: Topology, thresholds: Thresholds
) -> float:
    """Primary outage under the sharing protocol.

    Piecewise in the power split: below alpha_hat the relayed branch can
    still fail, at or above it only the no-decode branch contributes, so
    the expression is constant there.  Written as a sum of products of
    lower tails rather than one minus the success probability, which is
    the same quantity without subtractive cancellation.
    """
    fail = prob_st_fails(config, topology, thresholds)
    v = reg_lower_gamma(
        config.m, scaled_threshold(thresholds.rho1, topology.omega1, config)
    )
    if config.alpha >= thresholds.alpha_hat:
        return fail * v
    decode = prob_st_decodes(config, topology, thresholds)
    u = reg_lower_gamma(
        config.m,
        scaled_threshold(_residual_rho(config, thresholds), topology.omega1, config),
    )
    return decode * u + fail * v


def direct_outage(
    config: SystemConfig, topology: Topology, thresholds: Thresholds
) -> float:
    """Outage of one-phase direct transmission at the full target rate."""
    return reg_lower_gamma(
        config.m, scaled_threshold(thresholds.rho2, topology.omega1, config)
    )


def secondary_outage(
    config: SystemConfig, topology: Topology, thresholds: Thresholds
) -> float:
    """Secondary outage: decoding at the secondary transmitter, decoding of
    the relayed primary message at the secondary receiver, and the
    residual-power secondary link must all succeed."""
    fail = prob_st_fails(config, topology, thresholds)
    p5 = reg_lower_gamma(
        config.m, scaled_threshold(thresholds.rho1, topology.omega5, config)
    )
    residual_power = (1.0 - config.alpha) * config.ps_over_sigma2
    arg4 = config.m * thresholds.rho3 / (topology.omega4 * residual_power)
    p4 = reg_lower_gamma(config.m, arg4) if math.isfinite(arg4) else 1.0
    return _one_minus_product_of_complements(fail, p5, p4)


def _one_minus_product_of_complements(*probs: float) -> float:
    # 1 - prod(1 - p_i) without cancellation when every p_i is small
    if any(p == 1.0 for p in probs):
        return 1.0
    return -math.expm1(math.fsum(math.log1p(-p) for p in probs))


def analyze(
    config: SystemConfig,
    topology: Topology | None = None,
    thresholds: Thresholds | None = None,
) -> AnalysisPoint:
    """Evaluate every closed form at one operating point."""
    if topology is None:
        topology = derive_topology(config)
    if thresholds is None:
        thresholds = derive_thresholds(config)
    branch = (
        Branch.AT_OR_ABOVE_ALPHA_HAT
        if config.alpha >= thresholds.alpha_hat
        else Branch.BELOW_ALPHA_HAT
    )
    return AnalysisPoint(
        f_op=primary_outage(config, topology, thresholds),
        f_os=secondary_outage(config, topology, thresholds),
        p_d=direct_outage(config, topology, thresholds),
        branch=branch,
    )


def _direct_tail_pair(
    config: SystemConfig, topology: Topology, thresholds: Thresholds
) -> tuple[float, float]:
    # lower tails of the direct link at the one-phase and two-phase
    # thresholds; their ratio drives the access boundary
    w = reg_lower_gamma(
        config.m, scaled_threshold(thresholds.rho2, topology.omega1, config)
    )
    v = reg_lower_gamma(
        config.m, scaled_threshold(thresholds.rho1, topology.omega1, config)
    )
    return w, v


def critical_omega2(
    config: SystemConfig, topology: Topology, thresholds: Thresholds
) -> CriticalRegion:
    """Access-region boundary in the mean inter-transmitter power.

    The largest distance (smallest mean power omega2) at which cooperation
    with a split at or above alpha_hat still leaves the primary no worse
    off than direct transmission.
    """
    w, v = _direct_tail_pair(config, topology, thresholds)
    if v <= 0.0:
        raise DomainError("half-rate direct outage underflowed to zero; boundary undefined")
    ratio = w / v
    if not 0.0 < ratio < 1.0:
        raise DomainError(f"direct-tail ratio {ratio} outside (0, 1); no finite boundary")
    shape = config.n_antennas * config.m
    quantile = inv_reg_lower_gamma(shape, ratio)
    omega2_tilde = config.m * thresholds.rho1 / (config.pp_over_sigma2 * quantile)
    return CriticalRegion(
        omega2_tilde=omega2_tilde,
        d2_tilde=omega2_tilde ** (-1.0 / config.k),
    )


def critical_alpha(
    config: SystemConfig, topology: Topology, thresholds: Thresholds
) -> CriticalRegion:
    """Access-region boundary plus the minimum power split.

    alpha_tilde is the smallest split below alpha_hat at which the primary
    outage under sharing drops to the direct-transmission outage.  When
    even the limit split cannot reach it the status is INFEASIBLE; the
    distance boundary from :func:`critical_omega2` is reported either way.
    """
    base = critical_omega2(config, topology, thresholds)
    w, v = _direct_tail_pair(config, topology, thresholds)
    fail = prob_st_fails(config, topology, thresholds)
    decode = prob_st_decodes(config, topology, thresholds)
    if decode <= 0.0:
        raise DomainError("secondary never decodes here; the relayed branch is degenerate")
    phi = (w - v * fail) / decode
    if not 0.0 <= phi < 1.0:
        return CriticalRegion(
            omega2_tilde=base.omega2_tilde,
            d2_tilde=base.d2_tilde,
            alpha_status=AlphaStatus.INFEASIBLE,
        )
    chi = (
        topology.omega1
        * config.pp_over_sigma2
        / config.m
        * inv_reg_lower_gamma(config.m, phi)
    )
    status, alpha_tilde = _split_from_chi(chi, thresholds.rho1)
    return CriticalRegion(
        omega2_tilde=base.omega2_tilde,
        d2_tilde=base.d2_tilde,
        alpha_status=status,
        alpha_tilde=alpha_tilde,
        chi=chi,
        phi=phi,
    )


def _split_from_chi(chi: float, rho1: float) -> tuple[AlphaStatus, float]:
    # invert rho1 - alpha/(1 - alpha) = chi for alpha; a non-positive
    # excess means a zero split already suffices
    excess = rho1 - chi
    if excess <= 0.0:
        return AlphaStatus.NONE_NEEDED, 0.0
    return AlphaStatus.REQUIRED, excess / (1.0 + excess)


def _erlang_tails(n: int, t: float) -> tuple[float, float]:
    """Lower and upper CDF tails at t of an Erlang(n) with unit scale.

    Each tail is an all-positive Poisson sum, so both stay relatively
    accurate however small they are; they are not forced to sum to 1.
    """
    if t <= 0.0:
        return 0.0, 1.0
    partial = 1.0   # sum_{j < n} t^j / j!
    term = 1.0
    for j in range(1, n):
        term *= t / j
        partial += term
    if math.isinf(partial):
        return 1.0, 0.0
    upper = math.exp(-t) * partial
    if t < float(n):
        # lower tail as the complementary Poisson series from j = n up
        term = math.exp(-t)
        for j in range(1, n + 1):
            term *= t / j
        lower = 0.0
        j = n
        while term > 0.0:
            lower += term
            j += 1
            term *= t / j
            if term < lower * 1.0e-18:
                lower += term
                break
    else:
        lower = -math.expm1(math.log(partial) - t)
    return lower, upper


def rayleigh_oracle(
    config: SystemConfig, topology: Topology, thresholds: Thresholds
) -> AnalysisPoint:
    """Closed forms at m = 1 built purely from exponentials and Erlang
    tails, sharing no code with the incomplete-gamma kernel.

    Serves as an independent cross-check of :func:`analyze`; rejects any
    other fading figure.
    """
    if config.m != 1.0:
        raise DomainError("the exponential cross-check only covers m = 1")
    fail, decode = _erlang_tails(
        config.n_antennas,
        scaled_threshold(thresholds.rho1, topology.omega2, config),
    )
    v = -math.expm1(-scaled_threshold(thresholds.rho1, topology.omega1, config))
    if config.alpha >= thresholds.alpha_hat:
        branch = Branch.AT_OR_ABOVE_ALPHA_HAT
        f_op = fail * v
    else:
        branch = Branch.BELOW_ALPHA_HAT
        u = -math.expm1(
            -scaled_threshold(_residual_rho(config, thresholds), topology.omega1, config)
        )
        f_op = decode * u + fail * v
    p5 = -math.expm1(-scaled_threshold(thresholds.rho1, topology.omega5, config))
    residual_power = (1.0 - config.alpha) * config.ps_over_sigma2
    arg4 = thresholds.rho3 / (topology.omega4 * residual_power)
    p4 = -math.expm1(-arg4) if math.isfinite(arg4) else 1.0
    f_os = _one_minus_product_of_complements(fail, p5, p4)
    p_d = -math.expm1(-scaled_threshold(thresholds.rho2, topology.omega1, config))
    return AnalysisPoint(f_op=f_op, f_os=f_os, p_d=p_d, branch=branch)
