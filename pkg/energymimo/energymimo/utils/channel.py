"""
.. module:: channel
   :synopsis: Scenario generation: users, path loss, SINR targets, channels.

Users are dropped uniformly over an annular cell by inverse-CDF sampling of
their distance. The large-scale fading follows a log-distance path loss and
each user's SINR target grows with its channel quality, so that
cell-edge users are asked for less. Small-scale fading is i.i.d. Rayleigh,
optionally correlated across subcarriers through an exponential
power-delay profile, or a pure line-of-sight channel with unit-modulus
entries.

Every function takes an explicit `numpy.random.Generator`; nothing here
touches global random state.
"""
import logging
from typing import Optional, Tuple

import numpy as np

from ..exceptions import PowerDomainError
from ..models import (CellGeometry, ChannelKind, ChannelRealization,
                      QosTargets, ScenarioConfig)
from ..models.constants import (PATHLOSS_INTERCEPT_DB, PATHLOSS_SLOPE_DB,
                                SINR_SLOPE_DB, SINR_REFERENCE,
                                CORRELATION_DECAY)

logger = logging.getLogger(__name__)


def _check_counts(**counts):
    for name, value in counts.items():
        if value < 1:
            raise PowerDomainError(f'{name} must be >= 1, got {value}')


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape)
            + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def distance_quantile(v, geometry: CellGeometry) -> np.ndarray:
    """
    Inverse of the distance CDF F(u) = (u^2 - u_min^2)/(u_max^2 - u_min^2).

    :param v: probabilities in [0, 1]
    :return: distances in meters
    """
    v = np.asarray(v, dtype=float)
    return np.sqrt(geometry.u_min ** 2
                   + v * (geometry.u_max ** 2 - geometry.u_min ** 2))


def draw_user_distances(users: int,
                        geometry: CellGeometry,
                        rng: np.random.Generator) -> np.ndarray:
    """Distances of `users` users dropped uniformly over the cell area."""
    _check_counts(users=users)
    return distance_quantile(rng.random(users), geometry)


def large_scale_fading(distance) -> np.ndarray:
    """
    Linear path gain beta = 10^((-35.3 - 37.6 log10(u)) / 10).

    :raises PowerDomainError: for non-positive distances
    """
    u = np.asarray(distance, dtype=float)
    if np.any(u <= 0):
        raise PowerDomainError(f'distances must be positive, got {u}')
    beta_db = PATHLOSS_INTERCEPT_DB - PATHLOSS_SLOPE_DB * np.log10(u)
    return 10 ** (beta_db / 10)


def target_sinr(beta, reference: float = SINR_REFERENCE) -> np.ndarray:
    """Linear SINR target with gamma_dB = 5 log10(beta / reference)."""
    beta = np.asarray(beta, dtype=float)
    if np.any(beta <= 0):
        raise PowerDomainError(f'beta must be positive, got {beta}')
    gamma_db = SINR_SLOPE_DB * np.log10(beta / reference)
    return 10 ** (gamma_db / 10)


def exponential_delay_profile(taps: int,
                              decay: float = CORRELATION_DECAY) -> np.ndarray:
    """Tap powers proportional to exp(-decay * l / taps), summing to one."""
    _check_counts(taps=taps)
    profile = np.exp(-decay * np.arange(taps) / taps)
    return profile / profile.sum()


def draw_rayleigh_channel(antennas: int,
                          users: int,
                          subcarriers: int,
                          beta,
                          rng: np.random.Generator,
                          taps: Optional[int] = None,
                          decay: float = CORRELATION_DECAY) \
        -> ChannelRealization:
    """
    Rayleigh channel H_q = D_beta^(1/2) G_q for every subcarrier.

    Without `taps` the G_q are independent across subcarriers. With `taps`
    the channel impulse response has that many independent complex Gaussian
    taps following an exponential power-delay profile, and G_q is its
    Q-point frequency response; every entry keeps unit variance.

    :param antennas: M
    :param users: K
    :param subcarriers: Q
    :param beta: large-scale fading, length K
    :param rng: random source
    :param taps: number of delay taps, None for i.i.d. subcarriers
    :param decay: exponential decay of the delay profile

    :return: the realization, kind rayleigh
    :rtype: ChannelRealization
    """
    _check_counts(antennas=antennas, users=users, subcarriers=subcarriers)
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    if taps is None:
        g = _complex_gaussian(rng, (subcarriers, users, antennas))
    else:
        profile = exponential_delay_profile(taps, decay)
        impulse = _complex_gaussian(rng, (taps, users, antennas)) \
            * np.sqrt(profile)[:, np.newaxis, np.newaxis]
        # DFT of the impulse response evaluated on the Q subcarriers
        dft = np.exp(-2j * np.pi * np.outer(np.arange(subcarriers),
                                            np.arange(taps)) / subcarriers)
        g = np.einsum('ql,lkm->qkm', dft, impulse)
    h = np.sqrt(beta)[np.newaxis, :, np.newaxis] * g
    return ChannelRealization(h, beta, ChannelKind.RAYLEIGH)


def draw_los_channel(antennas: int,
                     users: int,
                     subcarriers: int,
                     rng: Optional[np.random.Generator] = None,
                     random_phase: bool = True) -> ChannelRealization:
    """Pure line-of-sight channel, |h_{k,m,q}| = 1 for every entry."""
    _check_counts(antennas=antennas, users=users, subcarriers=subcarriers)
    shape = (subcarriers, users, antennas)
    if random_phase:
        if rng is None:
            raise ValueError('random LOS phases need a random generator')
        h = np.exp(1j * rng.uniform(0, 2 * np.pi, shape))
    else:
        h = np.ones(shape, dtype=complex)
    return ChannelRealization(h, np.ones(users), ChannelKind.LOS)


def draw_scenario(scenario: ScenarioConfig,
                  users: int,
                  rng: np.random.Generator,
                  subcarriers: Optional[int] = None) \
        -> Tuple[ChannelRealization, QosTargets]:
    """
    One complete drop: user distances, their SINR targets and the channel.

    Distances are drawn first, so for a fixed seed the first K users of a
    drop with K' > K users sit at the same distances.
    """
    subcarriers = subcarriers or scenario.q_subcarriers
    distances = draw_user_distances(users, scenario.geometry, rng)
    beta = large_scale_fading(distances)
    gamma = target_sinr(beta, scenario.sinr_reference)
    if scenario.channel_kind is ChannelKind.LOS:
        channel = draw_los_channel(scenario.m_antennas, users, subcarriers,
                                   rng, scenario.los_random_phase)
    else:
        taps = (scenario.correlation_taps
                if scenario.frequency_correlation else None)
        channel = draw_rayleigh_channel(scenario.m_antennas, users,
                                        subcarriers, beta, rng, taps,
                                        scenario.correlation_decay)
    qos = QosTargets(gamma, scenario.noise_power, subcarriers)
    logger.debug('drew %s channel K=%d M=%d Q=%d, gamma_dB in [%.2f, %.2f]',
                 channel.kind.value, users, scenario.m_antennas,
                 subcarriers, 10 * np.log10(gamma.min()),
                 10 * np.log10(gamma.max()))
    return channel, qos
