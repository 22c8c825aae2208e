"""
.. module:: power_model
   :synopsis: Power amplifier and base-station consumption accounting.

Functions in this module turn precoding matrices into per-antenna transmit
powers and those powers into consumed power, under either the ideal
(constant efficiency) PA model or the square-root efficiency model of
backed-off class-B amplifiers. All quantities are linear Watts.

Functions
---------
- per_antenna_powers
- pa_consumed_power
- ideal_pa_consumed_power
- pa_efficiency
- bs_consumed_power
- gain_metrics
- estimate_flops
"""
import logging
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions import DimensionError, PowerDomainError
from ..models import BsModel, PaModel, PowerReport

logger = logging.getLogger(__name__)


class SystemKind(Enum):
    WIDEBAND = 'wideband'
    NARROWBAND = 'narrowband'
    ASYMPTOTIC = 'asymptotic'


class SolverKind(Enum):
    PROPOSED = 'proposed'
    CONVENTIONAL = 'conventional'


def _as_powers(powers: Sequence[float]) -> np.ndarray:
    p = np.atleast_1d(np.asarray(powers, dtype=float))
    if p.ndim != 1:
        raise DimensionError(f'powers must be a vector, got shape {p.shape}')
    if np.any(p < 0):
        raise PowerDomainError(
            f'transmit powers must be non-negative, got min {p.min()}')
    return p


def per_antenna_powers(matrices, antennas: Optional[int] = None) \
        -> np.ndarray:
    """
    Transmit power of every antenna, summed over users and subcarriers.

    :param matrices: precoders W_q, either an array of shape (Q, M, K), a
        single (M, K) matrix or a sequence of Q matrices of equal shape
    :type matrices: array_like
    :param antennas: expected M, checked when given
    :type antennas: int, optional

    :return: p_m = sum_q sum_k |w_{m,k,q}|^2, length M
    :rtype: numpy.ndarray

    :raises DimensionError: if the matrices do not share one (M, K) shape
    """
    if isinstance(matrices, np.ndarray):
        w = matrices
    else:
        shapes = {np.shape(m) for m in matrices}
        if len(shapes) != 1:
            raise DimensionError(
                f'precoders differ in shape across subcarriers: {shapes}')
        w = np.asarray(matrices)
    if w.ndim == 2:
        w = w[np.newaxis, ...]
    if w.ndim != 3:
        raise DimensionError(
            f'precoders must have shape (Q, M, K), got {w.shape}')
    if antennas is not None and w.shape[1] != antennas:
        raise DimensionError(
            f'precoders have {w.shape[1]} antennas, expected {antennas}')
    return np.sum(np.abs(w) ** 2, axis=(0, 2))


def pa_consumed_power(powers: Sequence[float], pa: PaModel) -> float:
    """Power consumed by the PAs, alpha * sum_m p_m^(1/2)."""
    p = _as_powers(powers)
    return float(pa.alpha * np.sum(np.sqrt(p)))


def ideal_pa_consumed_power(powers: Sequence[float], eta: float) -> float:
    """Consumption under a constant efficiency `eta`: sum_m p_m / eta."""
    if not 0 < eta <= 1:
        raise PowerDomainError(f'efficiency must lie in (0, 1], got {eta}')
    p = _as_powers(powers)
    return float(np.sum(p) / eta)


def pa_efficiency(p: float, pa: PaModel) -> float:
    """
    Efficiency of one PA delivering `p` Watts.

    :raises PowerDomainError: unless 0 < p <= p_sat
    """
    if not 0 < p <= pa.p_sat:
        raise PowerDomainError(
            f'PA output must lie in (0, {pa.p_sat}], got {p}')
    return float(pa.eta_sat * np.sqrt(p / pa.p_sat))


def bs_consumed_power(powers: Sequence[float],
                      pa: PaModel,
                      bs: BsModel) -> PowerReport:
    """
    Full consumption report of one base station.

    The antenna count entering the circuit term is the number of antennas
    whose transmit power exceeds `bs.active_power_threshold`. When nothing
    is consumed at all (p_bs = 0) the shares are reported as zeros.

    :param powers: per-antenna transmit powers
    :type powers: sequence of float
    :param pa: PA model providing alpha
    :type pa: PaModel
    :param bs: fixed and circuit consumption
    :type bs: BsModel

    :return: the filled report
    :rtype: PowerReport
    """
    p = _as_powers(powers)
    m_active = int(np.count_nonzero(p > bs.active_power_threshold))
    p_pas = pa_consumed_power(p, pa)
    p_circuit = bs.circuit_per_antenna * m_active
    p_bs = p_pas + bs.p_fix + p_circuit
    if p_bs > 0:
        shares = (p_pas / p_bs, p_circuit / p_bs, bs.p_fix / p_bs)
    else:
        shares = (0.0, 0.0, 0.0)
    return PowerReport(per_antenna=tuple(float(x) for x in p),
                       p_tx=float(np.sum(p)),
                       p_pas=p_pas,
                       p_bs=p_bs,
                       m_active=m_active,
                       shares=shares)


def gain_metrics(reference: PowerReport,
                 candidate: PowerReport) -> Tuple[float, float]:
    """
    Consumption ratios reference / candidate for the PAs and the whole BS.

    :raises ZeroDivisionError: if the candidate consumes nothing
    """
    if candidate.p_pas <= 0 or candidate.p_bs <= 0:
        raise ZeroDivisionError(
            'candidate consumption must be positive to compute a gain')
    return (reference.p_pas / candidate.p_pas,
            reference.p_bs / candidate.p_bs)


def estimate_flops(system: SystemKind,
                   solver: SolverKind,
                   users: int,
                   antennas: int,
                   subcarriers: int,
                   iterations: int = 1,
                   active_antennas: Optional[int] = None) -> float:
    """
    Complex floating point operations needed to compute the precoders of
    one coherence block.

    The conventional per-subcarrier ZF costs a Cholesky factorization of
    every Gram matrix plus the products around it. The proposed fixed point
    repeats that work each iteration and adds the power update. In the
    asymptotic wideband system the proposed precoder is a plain ZF over
    the `active_antennas` selected antennas.

    :param system: wideband, narrowband (Q forced to 1) or asymptotic
    :type system: SystemKind
    :param solver: proposed or conventional
    :type solver: SolverKind
    :param users: K
    :param antennas: M
    :param subcarriers: Q
    :param iterations: fixed point iterations I
    :param active_antennas: M_a, asymptotic system only (defaults to M)

    :return: flop count
    :rtype: float
    """
    system = SystemKind(system)
    solver = SolverKind(solver)
    for name, value in (('users', users), ('antennas', antennas),
                        ('subcarriers', subcarriers),
                        ('iterations', iterations)):
        if value < 1:
            raise PowerDomainError(f'{name} must be >= 1, got {value}')

    k, m, q = users, antennas, subcarriers
    if system is SystemKind.NARROWBAND:
        q = 1

    def zf_cost(m_used):
        return (k ** 3 * q / 3 + 3 * k ** 2 * m_used * q
                + 2 * k * m_used * q + k * q)

    if system is SystemKind.ASYMPTOTIC:
        if solver is SolverKind.CONVENTIONAL:
            return zf_cost(m)
        m_a = m if active_antennas is None else active_antennas
        if not 1 <= m_a <= m:
            raise PowerDomainError(
                f'active_antennas must lie in [1, {m}], got {m_a}')
        return zf_cost(m_a)

    if solver is SolverKind.CONVENTIONAL:
        return zf_cost(m)
    return (zf_cost(m) + k * q * m + k * m + q * m - 2 * m) * iterations
