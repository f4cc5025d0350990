"""Domain types for the two-phase sharing protocol.

A :class:`SystemConfig` fixes one operating point: transmit SNRs, target
rates, the secondary power split, antenna count, fading figure, path-loss
exponent and the primary-to-secondary distance.  From it the collinear
geometry (:func:`derive_topology`) and the rate thresholds
(:func:`derive_thresholds`) follow deterministically, and
:func:`sample_realization` draws the per-round link power gains.

Powers are carried as linear ratios of transmit power to noise power;
decibel conversion is a command-line concern.  Mean link powers follow
omega_i = d_i ** -k with the primary link distance normalized to 1, and
each power gain is gamma distributed with shape m and mean omega_i (the
amplitude is Nakagami-m).
"""

import math
import numbers
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "SystemConfig",
    "Topology",
    "Thresholds",
    "ChannelRealization",
    "derive_topology",
    "derive_thresholds",
    "sample_realization",
]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


def _finite_positive(value, name: str) -> None:
    _require(
        isinstance(value, numbers.Real) and math.isfinite(value) and value > 0.0,
        f"{name} must be positive and finite, got {value!r}",
    )


@dataclass(frozen=True)
class SystemConfig:
    """One operating point of the protocol.

    Defaults match the reference scenario used throughout the test suite:
    20 dB primary and 30 dB secondary SNR, unit target rates, two receive
    antennas and fourth-power path loss.
    """

    pp_over_sigma2: float = 100.0   # primary transmit SNR, linear
    ps_over_sigma2: float = 1000.0  # secondary transmit SNR, linear
    r_pt: float = 1.0               # primary target rate, bit/s/Hz
    r_st: float = 1.0               # secondary target rate, bit/s/Hz
    alpha: float = 0.5              # fraction of secondary power spent relaying
    n_antennas: int = 2             # receive antennas at the secondary transmitter
    m: float = 0.7                  # Nakagami fading figure, shared by all links
    k: float = 4.0                  # path-loss exponent
    d2: float = 0.8                 # primary-transmitter-to-secondary distance

    def __post_init__(self):
        _finite_positive(self.pp_over_sigma2, "pp_over_sigma2")
        _finite_positive(self.ps_over_sigma2, "ps_over_sigma2")
        _finite_positive(self.r_pt, "r_pt")
        _finite_positive(self.r_st, "r_st")
        _require(
            isinstance(self.alpha, numbers.Real) and 0.0 <= self.alpha < 1.0,
            f"alpha must lie in [0, 1), got {self.alpha!r}",
        )
        _require(
            isinstance(self.n_antennas, numbers.Integral)
            and not isinstance(self.n_antennas, bool)
            and self.n_antennas >= 1,
            f"n_antennas must be an integer >= 1, got {self.n_antennas!r}",
        )
        _require(
            isinstance(self.m, numbers.Real) and math.isfinite(self.m) and self.m >= 0.5,
            f"m must be >= 0.5 and finite, got {self.m!r}",
        )
        _finite_positive(self.k, "k")
        _finite_positive(self.d2, "d2")
        _require(self.d2 != 1.0, "d2 = 1 places the secondary on top of the primary receiver")


@dataclass(frozen=True)
class Topology:
    """Collinear node geometry and the mean link powers it implies.

    Distances are normalized to the primary link; link 3 spans the
    secondary transmitter to the primary receiver, links 4 and 5 the two
    halves of the secondary pair placement.
    """

    d1: float
    d2: float
    d3: float
    d4: float
    d5: float
    omega1: float
    omega2: float
    omega3: float
    omega4: float
    omega5: float


@dataclass(frozen=True)
class Thresholds:
    """SNR thresholds implied by the target rates."""

    rho1: float        # two-phase primary threshold, 2^(2 r_pt) - 1
    rho2: float        # one-phase primary threshold, 2^r_pt - 1
    rho3: float        # two-phase secondary threshold, 2^(2 r_st) - 1
    alpha_hat: float   # split above which the relayed term alone covers rho1


@dataclass(frozen=True)
class ChannelRealization:
    """Power gains of every link for one protocol round."""

    gamma1: float
    gamma2: tuple[float, ...]   # one entry per receive antenna
    gamma3: float
    gamma4: float
    gamma5: float


def derive_topology(config: SystemConfig) -> Topology:
    """Distances and mean link powers for the collinear layout."""
    if config.d2 == 1.0:
        raise DomainError("d2 = 1 places the secondary on top of the primary receiver")
    d3 = abs(1.0 - config.d2)
    d4 = config.d2 / 2.0
    k = config.k
    return Topology(
        d1=1.0,
        d2=config.d2,
        d3=d3,
        d4=d4,
        d5=d4,
        omega1=1.0,
        omega2=config.d2 ** -k,
        omega3=d3 ** -k,
        omega4=d4 ** -k,
        omega5=d4 ** -k,
    )


def derive_thresholds(config: SystemConfig) -> Thresholds:
    """Rate thresholds; two-phase operation halves the per-phase rate."""
    rho1 = 2.0 ** (2.0 * config.r_pt) - 1.0
    rho2 = 2.0 ** config.r_pt - 1.0
    rho3 = 2.0 ** (2.0 * config.r_st) - 1.0
    return Thresholds(rho1=rho1, rho2=rho2, rho3=rho3, alpha_hat=rho1 / (rho1 + 1.0))


def sample_realization(
    config: SystemConfig, topology: Topology, rng: np.random.Generator
) -> ChannelRealization:
    """Draw all link power gains for one round.

    Each gain is gamma distributed with shape m and scale omega / m, which
    gives mean omega and variance omega^2 / m.
    """
    m = config.m
    # draw order is part of the reproducibility contract: links 1..5
    gamma1 = float(rng.gamma(m, topology.omega1 / m))
    gamma2 = tuple(float(g) for g in rng.gamma(m, topology.omega2 / m, size=config.n_antennas))
    gamma3 = float(rng.gamma(m, topology.omega3 / m))
    gamma4 = float(rng.gamma(m, topology.omega4 / m))
    gamma5 = float(rng.gamma(m, topology.omega5 / m))
    return ChannelRealization(gamma1, gamma2, gamma3, gamma4, gamma5)
