"""Deterministic Monte Carlo replay of the two-phase protocol.

The simulator works at the achievable-rate level with exact expressions
(no high-SNR shortcut), so it doubles as an independent check of the
closed forms: agreement is exact for the secondary and direct events and
approaches the analysis for the primary event as the secondary SNR grows.

Reproducibility contract: trials are processed in fixed chunks of
CHUNK_SIZE, chunk i draws from the substream
``SeedSequence(entropy=seed, spawn_key=(i,))`` in a fixed link order, and
per-chunk failure counts are summed as integers.  Failure counts are
therefore bit-identical for any worker count and any chunk completion
order.  Rate ties count as outage: success requires strictly exceeding
the target.
"""

import math
import numbers
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import (
    ChannelRealization,
    SystemConfig,
    Topology,
    derive_topology,
)

__all__ = [
    "CHUNK_SIZE",
    "OutageEstimate",
    "sample_gain_chunk",
    "link_rates",
    "rates_for_realization",
    "primary_outage_mask",
    "secondary_outage_mask",
    "direct_outage_mask",
    "simulate_primary",
    "simulate_secondary",
    "simulate_direct",
]

CHUNK_SIZE = 1 << 16   # trials per substream; fixed by the reproducibility contract


@dataclass(frozen=True)
class OutageEstimate:
    """Empirical outage probability with its binomial standard error."""

    p_hat: float
    trials: int
    stderr: float
    seed: int
    failures: int


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def sample_gain_chunk(
    config: SystemConfig,
    topology: Topology,
    rng: np.random.Generator,
    size: int,
):
    """Draw `size` realizations of all link gains from one generator.

    Returns arrays (g1, g2, g3, g4, g5) with g2 of shape (size,
    n_antennas).  The draw order, links 1 through 5, is part of the
    reproducibility contract.
    """
    m = config.m
    g1 = rng.gamma(m, topology.omega1 / m, size)
    g2 = rng.gamma(m, topology.omega2 / m, (size, config.n_antennas))
    g3 = rng.gamma(m, topology.omega3 / m, size)
    g4 = rng.gamma(m, topology.omega4 / m, size)
    g5 = rng.gamma(m, topology.omega5 / m, size)
    return g1, g2, g3, g4, g5


def link_rates(config: SystemConfig, g1, g2_total, g3, g4, g5):
    """Achievable rates of one protocol round at unit noise power.

    Works elementwise on arrays and plain floats alike.  Returns
    (r_st_link, r_p, r_pd_half, r_sd, r_s):

    - r_st_link: combined rate of the primary message at the secondary
      transmitter in phase one,
    - r_p: primary rate with the phase-two relayed contribution, treating
      the unscaled secondary signal as interference,
    - r_pd_half: direct-link rate under the two-phase (halved) schedule,
    - r_sd: rate of the relayed primary message at the secondary receiver,
    - r_s: secondary-message rate on the residual power.
    """
    pp = config.pp_over_sigma2
    ps = config.ps_over_sigma2
    alpha = config.alpha
    relayed = alpha * ps * g3 / ((1.0 - alpha) * ps * g3 + 1.0)
    r_st_link = 0.5 * np.log2(1.0 + pp * g2_total)
    r_p = 0.5 * np.log2(1.0 + pp * g1 + relayed)
    r_pd_half = 0.5 * np.log2(1.0 + pp * g1)
    r_sd = 0.5 * np.log2(1.0 + pp * g5)
    r_s = 0.5 * np.log2(1.0 + (1.0 - alpha) * ps * g4)
    return r_st_link, r_p, r_pd_half, r_sd, r_s


def rates_for_realization(config: SystemConfig, realization: ChannelRealization):
    """Rate tuple for one drawn realization, as plain floats."""
    g2_total = float(np.sum(realization.gamma2))
    rates = link_rates(
        config,
        realization.gamma1,
        g2_total,
        realization.gamma3,
        realization.gamma4,
        realization.gamma5,
    )
    return tuple(float(r) for r in rates)


def primary_outage_mask(r_st_link, r_p, r_pd_half, r_pt):
    """True where the primary misses its target rate.

    When the secondary decodes (strictly beats the target in phase one)
    the relayed rate must carry the message; otherwise the halved direct
    rate must.  Phase-two gains never matter on no-decode rounds.
    """
    decoded = r_st_link > r_pt
    return np.where(decoded, r_p <= r_pt, r_pd_half <= r_pt)


def secondary_outage_mask(r_st_link, r_sd, r_s, r_pt, r_st):
    """True unless decoding, relaying and the secondary link all succeed."""
    success = (
        (np.asarray(r_st_link) > r_pt) & (np.asarray(r_sd) > r_pt) & (np.asarray(r_s) > r_st)
    )
    return np.logical_not(success)


def direct_outage_mask(r_pd_half, r_pt):
    """True where one-phase direct transmission misses the target.

    Doubling the half-schedule rate is exact in floating point, so this
    is the full-rate comparison."""
    return 2.0 * r_pd_half <= r_pt


def _chunk_plan(trials: int):
    n_chunks = (trials + CHUNK_SIZE - 1) // CHUNK_SIZE
    return [
        (i, min(CHUNK_SIZE, trials - i * CHUNK_SIZE))
        for i in range(n_chunks)
    ]


def _chunk_failures(
    config: SystemConfig,
    topology: Topology,
    seed: int,
    index: int,
    size: int,
    event: str,
) -> int:
    rng = _chunk_rng(seed, index)
    g1, g2, g3, g4, g5 = sample_gain_chunk(config, topology, rng, size)
    r_st_link, r_p, r_pd_half, r_sd, r_s = link_rates(
        config, g1, g2.sum(axis=1), g3, g4, g5
    )
    if event == "primary":
        mask = primary_outage_mask(r_st_link, r_p, r_pd_half, config.r_pt)
    elif event == "secondary":
        mask = secondary_outage_mask(r_st_link, r_sd, r_s, config.r_pt, config.r_st)
    else:
        mask = direct_outage_mask(r_pd_half, config.r_pt)
    return int(np.count_nonzero(mask))


def _estimate(
    config: SystemConfig, trials: int, seed: int, workers: int, event: str
) -> OutageEstimate:
    if not isinstance(trials, numbers.Integral) or trials < 1:
        raise DomainError(f"trials must be an integer >= 1, got {trials!r}")
    if not isinstance(seed, numbers.Integral) or seed < 0:
        raise DomainError(f"seed must be a non-negative integer, got {seed!r}")
    if not isinstance(workers, numbers.Integral) or workers < 1:
        raise DomainError(f"workers must be an integer >= 1, got {workers!r}")
    trials, seed, workers = int(trials), int(seed), int(workers)
    topology = derive_topology(config)
    plan = _chunk_plan(trials)
    if workers == 1:
        counts = [
            _chunk_failures(config, topology, seed, index, size, event)
            for index, size in plan
        ]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(
                pool.map(
                    lambda job: _chunk_failures(config, topology, seed, *job, event),
                    plan,
                )
            )
    failures = sum(counts)
    p_hat = failures / trials
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return OutageEstimate(
        p_hat=p_hat, trials=trials, stderr=stderr, seed=seed, failures=failures
    )


def simulate_primary(
    config: SystemConfig, trials: int, seed: int, workers: int = 1
) -> OutageEstimate:
    """Estimate the primary outage probability under the sharing protocol."""
    return _estimate(config, trials, seed, workers, "primary")


def simulate_secondary(
    config: SystemConfig, trials: int, seed: int, workers: int = 1
) -> OutageEstimate:
    """Estimate the secondary outage probability."""
    return _estimate(config, trials, seed, workers, "secondary")


def simulate_direct(
    config: SystemConfig, trials: int, seed: int, workers: int = 1
) -> OutageEstimate:
    """Estimate the primary outage probability without cooperation."""
    return _estimate(config, trials, seed, workers, "direct")
