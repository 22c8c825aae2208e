"""
.. module:: precoding
   :synopsis: Zero-forcing precoders minimizing transmit or consumed power.

All precoders satisfy the per-subcarrier zero-forcing constraint

    H_q W_q = diag((gamma_k / Q)^(1/2)) sigma_nu

and differ in how they spread power over the antennas. The conventional
solution minimizes total transmit power. The consumption-minimizing one
minimizes sum_m p_m^(1/2), the PA consumption of square-root efficiency
amplifiers; its optimum is a ZF solution re-weighted by the square roots of
the antenna powers, which are found with a fixed point iteration.

Functions
---------
- zf_precoder
- min_pa_precoder
- min_pa_precoder_narrowband
- single_user_narrowband_precoder
- single_user_saturating_precoder
- los_allocation_precoder
- asymptotic_zf_precoder
- zf_residual
- empirical_sinr
"""
import logging
from typing import Callable, Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from ..exceptions import (DimensionError, InfeasibleScenarioError,
                          PowerDomainError, SingularChannelError)
from ..models import (ChannelKind, ChannelRealization, FixedPointConfig,
                      PrecoderSolution, QosTargets)
from ..models.constants import GRAM_CONDITION_LIMIT
from .power_model import per_antenna_powers

logger = logging.getLogger(__name__)

#: called as callback(iteration, powers, residual) after every update
IterationCallback = Callable[[int, np.ndarray, float], None]


def _check_instance(channel: ChannelRealization, qos: QosTargets):
    if qos.users != channel.users:
        raise DimensionError(
            f'{qos.users} SINR targets for {channel.users} users')
    if qos.subcarriers != channel.subcarriers:
        raise DimensionError(
            f'targets normalized for Q={qos.subcarriers} but the channel '
            f'has {channel.subcarriers} subcarriers')


def _solve_gram(gram: np.ndarray, rhs: np.ndarray,
                regularization: float = 0.0) -> np.ndarray:
    """
    Solve gram @ x = rhs for a Hermitian positive definite K x K gram
    through its Cholesky factor.

    :raises SingularChannelError: if the factorization fails or the
        condition estimate exceeds the limit
    """
    if regularization:
        gram = gram + regularization * np.real(np.trace(gram)) \
            * np.eye(gram.shape[0])
    try:
        factor = cho_factor(gram, lower=True, check_finite=True)
    except (LinAlgError, ValueError) as exc:
        raise SingularChannelError(
            f'Gram matrix is not positive definite: {exc}') from exc
    diagonal = np.abs(np.diag(factor[0]))
    condition = (diagonal.max() / diagonal.min()) ** 2 \
        if diagonal.min() > 0 else np.inf
    if condition > GRAM_CONDITION_LIMIT:
        raise SingularChannelError(
            f'Gram matrix condition estimate {condition:.3g} exceeds '
            f'{GRAM_CONDITION_LIMIT:.0e}', condition=condition)
    return cho_solve(factor, rhs)


def _weighted_zf(channel: ChannelRealization,
                 targets: np.ndarray,
                 amplitudes: np.ndarray,
                 regularization: float = 0.0) -> np.ndarray:
    """
    W_q = A H_q^H (H_q A H_q^H)^(-1) diag(targets) with A = diag(amplitudes),
    restricted to the antennas with non-zero amplitude.

    Uniform amplitudes give the conventional ZF precoder.
    """
    active = np.flatnonzero(amplitudes > 0)
    if active.size < channel.users:
        raise SingularChannelError(
            f'only {active.size} antennas remain active for '
            f'{channel.users} users')
    rhs = np.diag(targets).astype(complex)
    matrices = np.zeros((channel.subcarriers, channel.antennas,
                         channel.users), dtype=complex)
    for q, h in enumerate(channel.per_subcarrier):
        h_active = h[:, active]
        scaled = h_active * amplitudes[active]
        gram = scaled @ h_active.conj().T
        matrices[q][active] = scaled.conj().T @ _solve_gram(
            gram, rhs, regularization)
    return matrices


def _solution(matrices: np.ndarray, threshold: float = 0.0,
              **diagnostics) -> PrecoderSolution:
    powers = per_antenna_powers(matrices)
    active = tuple(int(m) for m in np.flatnonzero(powers > threshold))
    return PrecoderSolution(matrices=matrices, powers=powers,
                            active_set=active, **diagnostics)


def zf_precoder(channel: ChannelRealization,
                qos: QosTargets) -> PrecoderSolution:
    """
    Per-subcarrier zero-forcing precoder of minimal transmit power,
    W_q = H_q^H (H_q H_q^H)^(-1) D_gamma~^(1/2) sigma_nu.

    :param channel: the channel of every subcarrier
    :type channel: ChannelRealization
    :param qos: SINR targets, normalized over `channel.subcarriers`
    :type qos: QosTargets

    :return: precoders and powers
    :rtype: PrecoderSolution

    :raises SingularChannelError: when M < K or a Gram matrix is
        numerically singular
    """
    _check_instance(channel, qos)
    if channel.antennas < channel.users:
        raise SingularChannelError(
            f'zero-forcing needs M >= K, got M={channel.antennas} '
            f'K={channel.users}')
    matrices = _weighted_zf(channel, qos.zf_targets,
                            np.ones(channel.antennas))
    return _solution(matrices)


def min_pa_precoder(channel: ChannelRealization,
                    qos: QosTargets,
                    cfg: Optional[FixedPointConfig] = None,
                    callback: Optional[IterationCallback] = None) \
        -> PrecoderSolution:
    """
    Zero-forcing precoder minimizing the consumption of square-root
    efficiency PAs.

    The optimal precoder of subcarrier q is

        W_q = D_p^(1/2) H_q^H (H_q D_p^(1/2) H_q^H)^(-1) D_gamma~^(1/2) sigma_nu

    where p holds the per-antenna powers the precoders themselves produce.
    Starting from uniform powers, the powers are recomputed from the
    precoders until the largest change drops to `cfg.tolerance`. Each update
    never increases sum_m p_m^(1/2), so the first iterate equals the
    conventional ZF solution and the following ones improve on it.

    Antennas whose power falls under `cfg.dead_antenna_floor` are switched
    off for good and leave the Gram solves.

    :param channel: channel of every subcarrier
    :type channel: ChannelRealization
    :param qos: SINR targets
    :type qos: QosTargets
    :param cfg: stopping rule and safeguards
    :type cfg: FixedPointConfig
    :param callback: called after every iteration with
        (iteration, powers, residual)

    :return: precoders built from the final powers, with convergence
        diagnostics; `converged` is False when the iteration budget ran out
    :rtype: PrecoderSolution

    :raises SingularChannelError: when the Gram matrix of the surviving
        antennas becomes singular
    """
    cfg = cfg or FixedPointConfig()
    _check_instance(channel, qos)
    if channel.antennas < channel.users:
        raise SingularChannelError(
            f'zero-forcing needs M >= K, got M={channel.antennas} '
            f'K={channel.users}')

    targets = qos.zf_targets
    powers = np.full(channel.antennas, cfg.initial_power)
    history = []
    converged = False
    iteration = 0
    residual = np.inf
    while iteration < cfg.max_iterations:
        iteration += 1
        matrices = _weighted_zf(channel, targets, np.sqrt(powers),
                                cfg.regularization)
        updated = per_antenna_powers(matrices)
        updated[updated < cfg.dead_antenna_floor] = 0.0
        residual = float(np.max(np.abs(updated - powers)))
        powers = updated
        history.append(residual)
        if callback is not None:
            callback(iteration, powers.copy(), residual)
        if residual <= cfg.tolerance:
            converged = True
            break

    if converged:
        logger.debug('fixed point converged after %d iterations, %d of %d '
                     'antennas active', iteration,
                     np.count_nonzero(powers), channel.antennas)
    else:
        logger.warning('fixed point stopped after %d iterations with '
                       'residual %.3e > %.1e', iteration, residual,
                       cfg.tolerance)

    matrices = _weighted_zf(channel, targets, np.sqrt(powers),
                            cfg.regularization)
    return _solution(matrices,
                     iterations=iteration,
                     converged=converged,
                     residual=residual,
                     residual_history=tuple(history))


def min_pa_precoder_narrowband(channel,
                               qos: QosTargets,
                               cfg: Optional[FixedPointConfig] = None,
                               callback: Optional[IterationCallback] = None) \
        -> PrecoderSolution:
    """
    Single-carrier form of :func:`min_pa_precoder`, where the targets are
    the unnormalized gamma_k.

    :param channel: a K x M matrix or a one-subcarrier realization
    """
    if not isinstance(channel, ChannelRealization):
        h = np.asarray(channel, dtype=complex)
        if h.ndim != 2:
            raise DimensionError(
                f'narrowband channel must be K x M, got shape {h.shape}')
        channel = ChannelRealization(h, np.ones(h.shape[0]))
    if channel.subcarriers != 1 or qos.subcarriers != 1:
        raise DimensionError('narrowband precoding needs Q = 1')
    return min_pa_precoder(channel, qos, cfg, callback)


def _single_user_vector(h) -> np.ndarray:
    h = np.asarray(h, dtype=complex).ravel()
    if h.size == 0:
        raise DimensionError('channel vector is empty')
    return h


def single_user_narrowband_precoder(h, gamma: float,
                                    sigma: float) -> PrecoderSolution:
    """
    Optimal single-user narrowband precoder: all power on the antenna with
    the largest channel gain (the lowest index among equals).

    :param h: channel vector, length M
    :param gamma: linear SINR target
    :param sigma: noise standard deviation sigma_nu

    :raises InfeasibleScenarioError: if the channel is all zeros
    """
    h = _single_user_vector(h)
    gains = np.abs(h)
    best = int(np.argmax(gains))
    if gains[best] == 0:
        raise InfeasibleScenarioError('channel is zero on every antenna',
                                      deficit=sigma * np.sqrt(gamma))
    w = np.zeros((1, h.size, 1), dtype=complex)
    w[0, best, 0] = sigma * np.sqrt(gamma) * np.conj(h[best]) \
        / gains[best] ** 2
    return _solution(w)


def single_user_saturating_precoder(h, gamma: float, sigma: float,
                                    p_max: float) -> PrecoderSolution:
    """
    Single-user narrowband precoder under a per-antenna power limit.

    Antennas are filled to `p_max` in decreasing order of channel gain
    until the received amplitude sum_m |h_m| p_m^(1/2) reaches
    sigma gamma^(1/2); the last antenna used takes only the power still
    missing. Phases are matched to the channel.

    :raises InfeasibleScenarioError: if even all antennas at `p_max` fall
        short; `deficit` holds the missing amplitude
    """
    if not p_max > 0:
        raise PowerDomainError(f'p_max must be positive, got {p_max}')
    h = _single_user_vector(h)
    gains = np.abs(h)
    target = sigma * np.sqrt(gamma)
    order = np.argsort(-gains, kind='stable')
    reach = np.cumsum(gains[order]) * np.sqrt(p_max)
    if reach[-1] < target * (1 - 1e-12):
        deficit = float(target - reach[-1])
        raise InfeasibleScenarioError(
            f'target amplitude {target:.4g} exceeds the reachable '
            f'{reach[-1]:.4g} by {deficit:.4g}', deficit=deficit)

    last = int(min(np.searchsorted(reach, target * (1 - 1e-12)),
                   h.size - 1))
    powers = np.zeros(h.size)
    powers[order[:last]] = p_max
    missing = target - (reach[last - 1] if last > 0 else 0.0)
    powers[order[last]] = min((missing / gains[order[last]]) ** 2, p_max)

    phases = np.zeros(h.size, dtype=complex)
    nonzero = gains > 0
    phases[nonzero] = np.conj(h[nonzero]) / gains[nonzero]
    w = (np.sqrt(powers) * phases).reshape(1, h.size, 1)
    return _solution(w)


def los_allocation_precoder(channel: ChannelRealization,
                            gamma: float,
                            sigma: float,
                            weights) -> PrecoderSolution:
    """
    One optimal single-user precoder of a pure line-of-sight wideband
    channel.

    With unit-modulus channels any split p_m^(1/2) = weights_m sigma
    gamma^(1/2) is optimal; the PA consumption alpha sigma gamma^(1/2) does
    not depend on the weights. The precoder of antenna m on subcarrier q is
    p_m^(1/2) h*_{m,q} / Q^(1/2).

    :param channel: LOS channel with a single user
    :param gamma: SINR target over all subcarriers
    :param sigma: noise standard deviation
    :param weights: non-negative, summing to one, length M
    """
    if channel.users != 1:
        raise DimensionError(
            f'LOS allocation serves one user, got {channel.users}')
    h = channel.per_subcarrier[:, 0, :]
    if channel.kind is not ChannelKind.LOS \
            or not np.allclose(np.abs(h), 1, rtol=0, atol=1e-9):
        raise PowerDomainError('LOS allocation needs |h_{m,q}| = 1')
    weights = np.asarray(weights, dtype=float).ravel()
    if weights.shape != (channel.antennas,):
        raise DimensionError(
            f'{weights.size} weights for {channel.antennas} antennas')
    if np.any(weights < 0) or not np.isclose(weights.sum(), 1,
                                             rtol=0, atol=1e-9):
        raise PowerDomainError('weights must be non-negative and sum to 1')

    amplitudes = weights * sigma * np.sqrt(gamma)
    w = amplitudes[np.newaxis, :] * np.conj(h) \
        / np.sqrt(channel.subcarriers)
    return _solution(w[:, :, np.newaxis])


def asymptotic_zf_precoder(channel: ChannelRealization,
                           qos: QosTargets,
                           m_active: int) -> PrecoderSolution:
    """
    Conventional ZF on the first `m_active` antennas only, the others
    switched off. Under i.i.d. fading any subset of that size is
    statistically equivalent.
    """
    _check_instance(channel, qos)
    if not channel.users <= m_active <= channel.antennas:
        raise PowerDomainError(
            f'm_active must lie in [{channel.users}, {channel.antennas}], '
            f'got {m_active}')
    amplitudes = np.zeros(channel.antennas)
    amplitudes[:m_active] = 1.0
    return _solution(_weighted_zf(channel, qos.zf_targets, amplitudes))


def zf_residual(channel: ChannelRealization,
                qos: QosTargets,
                solution: PrecoderSolution) -> float:
    """max over q, k, k' of |[H_q W_q]_{k',k} - delta_{k',k} target_k|"""
    _check_instance(channel, qos)
    effective = channel.per_subcarrier @ solution.matrices
    return float(np.max(np.abs(effective - np.diag(qos.zf_targets))))


def empirical_sinr(channel: ChannelRealization,
                   solution: PrecoderSolution,
                   noise_power: float) -> np.ndarray:
    """
    SINR of every user on every subcarrier, shape (Q, K).
    """
    effective = np.abs(channel.per_subcarrier @ solution.matrices) ** 2
    signal = np.diagonal(effective, axis1=1, axis2=2)
    interference = effective.sum(axis=2) - signal
    return signal / (interference + noise_power)
