"""
.. module:: validation
   :synopsis: Identity checks run by the ``validate`` command.

Each check compares a production code path against an independent one from
:mod:`oracle` (or against an exact identity) on freshly drawn instances and
returns a :class:`CheckResult`. :func:`run_validation` runs them all.
"""
import logging
import math
import time
from dataclasses import dataclass, replace
from typing import List

import numpy as np

from ..models import ExperimentConfig, FixedPointConfig
from ..models.constants import ZF_TOLERANCE
from .asymptotic import (optimal_ma_constrained, feasibility_check,
                         quartic_root, solve_quartic_ma)
from .channel import draw_los_channel, draw_scenario
from .oracle import (grid_min_bs, mc_inverse_wishart_trace,
                     solve_min_pa_bruteforce)
from .power_model import pa_consumed_power, pa_efficiency
from .precoding import (los_allocation_precoder, min_pa_precoder,
                        zf_precoder, zf_residual)

logger = logging.getLogger(__name__)

ORACLE_RELATIVE_TOLERANCE = 1e-3
WISHART_RELATIVE_TOLERANCE = 0.02
WISHART_DRAWS = 10_000


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_zf_residual(config: ExperimentConfig, instances: int = 20) \
        -> CheckResult:
    """ZF constraint residual, relative to the largest target."""
    rng = np.random.default_rng(config.scenario.seed)
    worst = 0.0
    for _ in range(instances):
        users = int(rng.integers(1, 9))
        channel, qos = draw_scenario(config.scenario, users, rng,
                                     subcarriers=int(rng.integers(1, 17)))
        if channel.antennas < users:
            continue
        solution = zf_precoder(channel, qos)
        worst = max(worst, zf_residual(channel, qos, solution)
                    / qos.zf_targets.max())
    return CheckResult('zf_residual', worst <= ZF_TOLERANCE,
                       f'worst relative residual {worst:.2e}')


def check_bruteforce_equivalence(config: ExperimentConfig,
                                 instances: int = 10) -> CheckResult:
    """Fixed point objective against the null-space descent optimum."""
    scenario = config.scenario
    rng = np.random.default_rng(scenario.seed + 1)
    tight = FixedPointConfig(tolerance=1e-12, max_iterations=50_000)
    worst = 0.0
    for _ in range(instances):
        users = int(rng.integers(1, 4))
        antennas = int(rng.integers(users + 1, 7))
        q = int(rng.integers(1, 5))
        small = replace(scenario, m_antennas=antennas)
        channel, qos = draw_scenario(small, users, rng, subcarriers=q)
        fixed_point = pa_consumed_power(
            min_pa_precoder(channel, qos, tight).powers, scenario.pa)
        oracle = solve_min_pa_bruteforce(
            channel, qos, scenario.pa, scenario.oracle_starts, rng,
            (antennas, users, q)).objective
        worst = max(worst, abs(fixed_point - oracle) / oracle)
    return CheckResult('bruteforce_equivalence',
                       worst <= ORACLE_RELATIVE_TOLERANCE,
                       f'worst relative gap {worst:.2e}')


def check_wishart_identity(config: ExperimentConfig,
                           antennas: int = 16, users: int = 4) \
        -> CheckResult:
    """E[tr((H H^H)^-1 D_gamma sigma^2)] = T / (M - K)"""
    rng = np.random.default_rng(config.scenario.seed + 2)
    beta = rng.uniform(0.5, 2.0, users)
    gamma = rng.uniform(1.0, 10.0, users)
    noise = 1.0
    exact = float(np.sum(gamma * noise / beta)) / (antennas - users)
    estimate = mc_inverse_wishart_trace(antennas, users, beta, gamma, noise,
                                        WISHART_DRAWS, rng)
    gap = abs(estimate - exact) / exact
    return CheckResult('wishart_identity', gap <= WISHART_RELATIVE_TOLERANCE,
                       f'estimate {estimate:.5g}, exact {exact:.5g}')


def check_grid_equivalence(config: ExperimentConfig,
                           scenarios: int = 100) -> CheckResult:
    """Optimal antenna count against exhaustive search."""
    scenario = config.scenario
    rng = np.random.default_rng(scenario.seed + 3)
    mismatches, tried = [], 0
    while tried < scenarios:
        users = int(rng.integers(1, 17))
        antennas = int(rng.integers(users + 1, 257))
        trace = float(10 ** rng.uniform(-2, 2)) * users
        if not feasibility_check(antennas, users, trace, scenario.p_max):
            continue
        tried += 1
        planned = optimal_ma_constrained(antennas, users, trace,
                                         scenario.pa, scenario.bs).m_dagger
        searched = grid_min_bs(antennas, users, trace, scenario.pa,
                               scenario.bs)
        if planned != searched:
            mismatches.append((antennas, users, planned, searched))
    return CheckResult('grid_equivalence', not mismatches,
                       f'{len(mismatches)} mismatches in {scenarios}'
                       + (f', first {mismatches[0]}' if mismatches else ''))


def check_quartic(config: ExperimentConfig, cases: int = 100) \
        -> CheckResult:
    """Quartic residual and stationarity of the continuous optimum."""
    rng = np.random.default_rng(config.scenario.seed + 4)
    worst = 0.0
    for _ in range(cases):
        users = int(rng.integers(1, 41))
        constant = float(10 ** rng.uniform(-3, 8))
        x = quartic_root(users, constant)
        worst = max(worst, abs(x * (x - users) ** 3 - constant) / constant)
    t = config.scenario.pa.alpha
    circuit = config.scenario.bs.circuit_per_antenna
    slope = 0.0
    if circuit > 0:
        users = 4
        x = solve_quartic_ma(users, t, circuit)
        slope = (circuit - t * users
                 / (2 * math.sqrt(x) * (x - users) ** 1.5)) / circuit
    return CheckResult('quartic', worst <= 1e-9 and abs(slope) <= 1e-9,
                       f'worst relative residual {worst:.2e}, '
                       f'slope at optimum {slope:.2e}')


def check_pa_consumption(config: ExperimentConfig) -> CheckResult:
    """
    alpha sum_m p_m^(1/2) must equal sum_m p_m / eta(p_m), and the LOS
    optimum must consume alpha sigma gamma^(1/2) whatever its split.
    """
    pa = config.scenario.pa
    rng = np.random.default_rng(config.scenario.seed + 5)
    powers = rng.uniform(1e-3, pa.p_max, 16)
    from_efficiency = sum(p / pa_efficiency(p, pa) for p in powers)
    consumed = pa_consumed_power(powers, pa)
    gap = abs(consumed - from_efficiency) / from_efficiency

    channel = draw_los_channel(8, 1, 4, rng)
    gamma, sigma = 10.0, 1.0
    expected = pa.alpha * sigma * math.sqrt(gamma)
    for _ in range(5):
        weights = rng.dirichlet(np.ones(8))
        solution = los_allocation_precoder(channel, gamma, sigma, weights)
        gap = max(gap, abs(pa_consumed_power(solution.powers, pa)
                           - expected) / expected)
    return CheckResult('pa_consumption', gap <= 1e-12,
                       f'worst relative gap {gap:.2e}')


CHECKS = (check_zf_residual, check_bruteforce_equivalence,
          check_wishart_identity, check_grid_equivalence, check_quartic,
          check_pa_consumption)


def run_validation(config: ExperimentConfig) -> List[CheckResult]:
    results = []
    for check in CHECKS:
        start = time.time()
        result = check(config)
        logger.info('%-24s %s (%s, %.1f s)', result.name,
                    'pass' if result.passed else 'FAIL', result.detail,
                    time.time() - start)
        results.append(result)
    return results
