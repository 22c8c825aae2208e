"""
.. module:: asymptotic
   :synopsis: Deterministic powers and optimal antenna counts for Q -> inf.

When the number of subcarriers grows, the consumption-minimizing precoder
spreads power uniformly over the active antennas and each antenna radiates

    p_bar = T / (M_a (M_a - K)),    T = tr(D_beta^-1 D_gamma sigma_nu^2)

so the base-station consumption

    f(M_a) = alpha (M_a T / (M_a - K))^(1/2) + p_fix + C M_a

depends only on large-scale quantities. `f` is convex for M_a > K; its
stationary point solves x (x - K)^3 = (t K / (2 C))^2 with t = alpha T^(1/2).
This module picks the best integer M_a, subject to the per-antenna power
limit and to the antennas available.
"""
import logging
import math
from typing import Tuple

import numpy as np

from ..exceptions import InfeasibleScenarioError, PowerDomainError
from ..models import AsymptoticPlan, BsModel, PaModel

logger = logging.getLogger(__name__)

QUARTIC_MAX_STEPS = 200


def trace_term(beta, gamma, noise_power: float) -> float:
    """T = sum_k gamma_k sigma_nu^2 / beta_k"""
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if np.any(beta <= 0):
        raise PowerDomainError(f'beta must be positive, got {beta}')
    if np.any(gamma < 0) or noise_power < 0:
        raise PowerDomainError('gamma and noise power must be non-negative')
    return float(np.sum(gamma * noise_power / beta))


def _check_active(m_active, users: int):
    if not m_active > users:
        raise PowerDomainError(
            f'zero-forcing {users} users needs more than {users} active '
            f'antennas, got {m_active}')


def asymptotic_per_antenna_power(m_active, users: int,
                                 trace: float) -> float:
    """p_bar = T / (M_a (M_a - K))"""
    _check_active(m_active, users)
    return trace / (m_active * (m_active - users))


def asymptotic_pa_power(m_active, users: int, trace: float,
                        pa: PaModel) -> float:
    """PA consumption alpha M_a p_bar^(1/2), decreasing in M_a."""
    _check_active(m_active, users)
    return pa.alpha * math.sqrt(m_active * trace / (m_active - users))


def asymptotic_bs_breakdown(m_active, users: int, trace: float,
                            pa: PaModel,
                            bs: BsModel) -> Tuple[float, float, float]:
    """(PA, circuit, fixed) consumption with M_a active antennas."""
    return (asymptotic_pa_power(m_active, users, trace, pa),
            bs.circuit_per_antenna * m_active,
            bs.p_fix)


def asymptotic_bs_power(m_active, users: int, trace: float,
                        pa: PaModel, bs: BsModel) -> float:
    return sum(asymptotic_bs_breakdown(m_active, users, trace, pa, bs))


def quartic_root(users: int, constant: float) -> float:
    """
    The unique root x > K of x (x - K)^3 = constant.

    The left side is increasing and convex on (K, inf), so the root is
    bracketed by [K, K + constant^(1/4)] and refined by Newton steps,
    falling back to bisection whenever a step leaves the bracket.

    :param users: K
    :param constant: right-hand side, >= 0
    :return: the root; K itself when constant is 0
    """
    if users < 1:
        raise PowerDomainError(f'K must be >= 1, got {users}')
    if constant < 0:
        raise PowerDomainError(f'constant must be >= 0, got {constant}')
    if constant == 0:
        return float(users)

    def f(x):
        return x * (x - users) ** 3 - constant

    def df(x):
        return (x - users) ** 2 * (4 * x - users)

    lo, hi = float(users), users + constant ** 0.25
    # hi - K = constant^(1/4) already gives f(hi) >= 0; widen for rounding
    while f(hi) < 0:
        hi += hi - lo
    x = hi
    for _ in range(QUARTIC_MAX_STEPS):
        fx = f(x)
        if fx == 0:
            break
        if fx > 0:
            hi = x
        else:
            lo = x
        slope = df(x)
        step = x - fx / slope if slope > 0 else None
        x_next = step if step is not None and lo < step < hi \
            else 0.5 * (lo + hi)
        if abs(x_next - x) <= 4 * np.finfo(float).eps * x:
            x = x_next
            break
        x = x_next
    return float(x)


def solve_quartic_ma(users: int, t: float, circuit: float) -> float:
    """
    Continuous minimizer of the asymptotic BS consumption: the root x > K
    of x (x - K)^3 = (t K / (2 C))^2.

    :param users: K
    :param t: alpha T^(1/2)
    :param circuit: per-antenna circuit consumption C
    """
    if not t > 0 or not circuit > 0:
        raise PowerDomainError(
            f't and C must be positive, got t={t}, C={circuit}')
    return quartic_root(users, (t * users / (2 * circuit)) ** 2)


def _continuous_optimum(users: int, trace: float, pa: PaModel,
                        bs: BsModel) -> float:
    if bs.circuit_per_antenna == 0:
        return math.inf
    if trace == 0:
        return float(users)
    return solve_quartic_ma(users, pa.alpha * math.sqrt(trace),
                            bs.circuit_per_antenna)


def _ceil_floor(y: float, users: int, trace: float, pa: PaModel,
                bs: BsModel) -> int:
    low, high = math.floor(y), math.ceil(y)
    if low == high:
        return int(low)
    # ties go to the smaller count
    if asymptotic_bs_power(low, users, trace, pa, bs) \
            <= asymptotic_bs_power(high, users, trace, pa, bs):
        return int(low)
    return int(high)


def optimal_ma_unconstrained(antennas: int, users: int, trace: float,
                             pa: PaModel, bs: BsModel) -> int:
    """
    Best integer number of active antennas ignoring the per-antenna power
    limit: the continuous optimum clamped to [K + 1, M], then rounded to
    whichever neighbour consumes less.

    :raises InfeasibleScenarioError: if M <= K
    """
    if antennas <= users:
        raise InfeasibleScenarioError(
            f'{antennas} antennas cannot zero-force {users} users',
            min_antennas=users + 1)
    y = _continuous_optimum(users, trace, pa, bs)
    y = min(max(y, users + 1), antennas)
    return _ceil_floor(y, users, trace, pa, bs)


def min_ma_power_constraint(users: int, trace: float, p_max: float) -> int:
    """
    Fewest active antennas keeping p_bar <= p_max:
    ceil((K + (K^2 + 4 T / p_max)^(1/2)) / 2).
    """
    if not p_max > 0:
        raise PowerDomainError(f'p_max must be positive, got {p_max}')
    bound = (users + math.sqrt(users ** 2 + 4 * trace / p_max)) / 2
    m_hat = math.ceil(bound)
    # rounding in the square root may push an exact integer bound up
    if m_hat - 1 > users and \
            asymptotic_per_antenna_power(m_hat - 1, users, trace) <= p_max:
        m_hat -= 1
    return int(m_hat)


def minimal_feasible_antennas(users: int, trace: float, p_max: float) -> int:
    """Smallest M > K for which all M antennas respect p_max."""
    return max(users + 1, min_ma_power_constraint(users, trace, p_max))


def feasibility_check(antennas: int, users: int, trace: float,
                      p_max: float) -> bool:
    """
    Whether activating all M antennas respects the per-antenna limit,
    T / (M (M - K)) <= p_max.

    :raises InfeasibleScenarioError: if M <= K
    """
    if antennas <= users:
        raise InfeasibleScenarioError(
            f'{antennas} antennas cannot zero-force {users} users',
            min_antennas=users + 1)
    return asymptotic_per_antenna_power(antennas, users, trace) <= p_max


def optimal_ma_constrained(antennas: int, users: int, trace: float,
                           pa: PaModel, bs: BsModel,
                           p_max: float = None) -> AsymptoticPlan:
    """
    Optimal integer number of active antennas under the per-antenna power
    limit.

    With y = max(M_hat, M_tilde): use K + 1 antennas if y <= K + 1, all M
    if y >= M, and otherwise whichever of floor(y), ceil(y) consumes less.

    :param antennas: M
    :param users: K
    :param trace: T
    :param pa: PA model
    :param bs: BS model
    :param p_max: per-antenna limit, defaults to `pa.p_max`

    :return: the plan and the consumption it predicts
    :rtype: AsymptoticPlan

    :raises InfeasibleScenarioError: if even M antennas exceed p_max;
        `min_antennas` holds the smallest M that would not
    """
    p_max = pa.p_max if p_max is None else p_max
    if not feasibility_check(antennas, users, trace, p_max):
        needed = minimal_feasible_antennas(users, trace, p_max)
        raise InfeasibleScenarioError(
            f'{antennas} antennas exceed p_max={p_max:g} W for K={users}; '
            f'at least {needed} are needed', min_antennas=needed)

    m_tilde = _continuous_optimum(users, trace, pa, bs)
    m_hat = min_ma_power_constraint(users, trace, p_max)
    y = max(m_hat, m_tilde)
    if y <= users + 1:
        m_dagger = users + 1
    elif y >= antennas:
        m_dagger = antennas
    else:
        m_dagger = _ceil_floor(y, users, trace, pa, bs)

    pa_power, circuit, fixed = asymptotic_bs_breakdown(
        m_dagger, users, trace, pa, bs)
    logger.debug('K=%d M=%d: M_tilde=%.3f M_hat=%d -> M_dagger=%d',
                 users, antennas, m_tilde, m_hat, m_dagger)
    return AsymptoticPlan(
        m_tilde=m_tilde,
        m_hat=m_hat,
        m_dagger=m_dagger,
        p_bar=asymptotic_per_antenna_power(m_dagger, users, trace),
        p_pas_bar=pa_power,
        p_bs_bar=pa_power + circuit + fixed,
        feasible=True)
