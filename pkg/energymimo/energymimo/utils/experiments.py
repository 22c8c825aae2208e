"""
.. module:: experiments
   :synopsis: Seeded Monte-Carlo drivers behind the management commands.

Every driver returns pandas DataFrames; the commands write them with
:func:`write_csv`. Realization ``i`` always draws from
``numpy.random.default_rng(seed + i)``, and realizations are mapped over a
thread pool with ``Executor.map``, which yields results in submission
order. Output therefore only depends on the seed, never on scheduling.

Functions
---------
- run_experiment
- summarize_run
- convergence_experiment
- asymptotic_experiment
- finite_q_experiment
- write_csv
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional

import numpy as np
import pandas as pd

from ..exceptions import (InfeasibleScenarioError, OracleSizeError,
                          SingularChannelError)
from ..models import ExperimentConfig, ScenarioConfig
from ..models.constants import CSV_FLOAT_FORMAT
from .asymptotic import (asymptotic_bs_breakdown, asymptotic_bs_power,
                         asymptotic_pa_power, optimal_ma_constrained,
                         trace_term)
from .channel import (draw_scenario, draw_user_distances,
                      large_scale_fading, target_sinr)
from .oracle import solve_min_pa_bruteforce
from .power_model import bs_consumed_power, gain_metrics
from .precoding import (asymptotic_zf_precoder, min_pa_precoder,
                        single_user_saturating_precoder, zf_precoder)

logger = logging.getLogger(__name__)

RUN_COLUMNS = ['seed', 'realization', 'k_users', 'solver', 'p_tx', 'p_pas',
               'p_bs', 'm_active', 'gain_pas', 'gain_bs', 'iterations',
               'discarded']

#: solvers relying on unconstrained per-antenna powers
UNCAPPED_SOLVERS = ('zf', 'min_pa')


def map_realizations(function: Callable[[int], List[dict]],
                     realizations: int,
                     threads: Optional[int] = None) -> List[dict]:
    """
    Run `function(index)` for every realization and concatenate the rows,
    in realization order.
    """
    if threads is None or threads <= 1:
        chunks = map(function, range(realizations))
        return [row for chunk in chunks for row in chunk]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        chunks = executor.map(function, range(realizations))
        return [row for chunk in chunks for row in chunk]


def _solve(name: str, channel, qos, scenario: ScenarioConfig):
    if name == 'zf':
        return zf_precoder(channel, qos)
    if name == 'min_pa':
        return min_pa_precoder(channel, qos, scenario.fixed_point)
    if name == 'saturating':
        if channel.users != 1 or channel.subcarriers != 1:
            return None
        return single_user_saturating_precoder(
            channel.per_subcarrier[0, 0], qos.gamma[0], qos.sigma,
            scenario.p_max)
    if name == 'asymptotic_zf':
        trace = trace_term(channel.large_scale, qos.gamma, qos.noise_power)
        plan = optimal_ma_constrained(channel.antennas, channel.users, trace,
                                      scenario.pa, scenario.bs)
        return asymptotic_zf_precoder(channel, qos, plan.m_dagger)
    raise ValueError(f'unknown solver {name!r}')


def _run_realization(config: ExperimentConfig, users: int,
                     index: int) -> List[dict]:
    scenario = config.scenario
    seed = scenario.seed + index
    channel, qos = draw_scenario(scenario, users,
                                 np.random.default_rng(seed))
    reports, solutions = {}, {}
    for name in dict.fromkeys(('zf',) + tuple(config.precoders)):
        try:
            solution = _solve(name, channel, qos, scenario)
        except (InfeasibleScenarioError, SingularChannelError) as exc:
            logger.warning('realization %d K=%d: %s skipped: %s',
                           index, users, name, exc)
            continue
        if solution is None:
            logger.warning('realization %d: saturating precoder needs '
                           'K=1 and Q=1, skipped', index)
            continue
        solutions[name] = solution
        reports[name] = bs_consumed_power(solution.powers, scenario.pa,
                                          scenario.bs)

    over_limit = config.discard_over_pmax and any(
        np.any(solutions[name].powers > scenario.p_max)
        for name in UNCAPPED_SOLVERS if name in solutions)
    rows = []
    for name in config.precoders:
        if name not in reports:
            continue
        report = reports[name]
        if 'zf' in reports:
            gain_pas, gain_bs = gain_metrics(reports['zf'], report)
        else:
            gain_pas = gain_bs = np.nan
        rows.append({
            'seed': seed,
            'realization': index,
            'k_users': users,
            'solver': name,
            'p_tx': report.p_tx,
            'p_pas': report.p_pas,
            'p_bs': report.p_bs,
            'm_active': report.m_active,
            'gain_pas': gain_pas,
            'gain_bs': gain_bs,
            'iterations': solutions[name].iterations,
            'discarded': bool(over_limit and name in UNCAPPED_SOLVERS),
        })
    return rows


def run_experiment(config: ExperimentConfig,
                   threads: Optional[int] = None) -> pd.DataFrame:
    """
    Per-realization consumption of every selected precoder, with gains
    against the conventional ZF precoder of the same realization.

    When `config.discard_over_pmax` is set, realizations in which ZF or the
    fixed point precoder drive an antenna above p_max are flagged in the
    ``discarded`` column and left out of :func:`summarize_run`.

    :param config: experiment to run
    :type config: ExperimentConfig
    :param threads: worker threads, overrides `config.threads`
    :type threads: int, optional

    :return: one row per (K, realization, solver)
    :rtype: pandas.DataFrame
    """
    threads = threads or config.threads
    frames = []
    for users in config.scenario.user_counts:
        start = time.time()
        rows = map_realizations(
            lambda index: _run_realization(config, users, index),
            config.realizations, threads)
        frames.append(pd.DataFrame(rows, columns=RUN_COLUMNS))
        logger.info('K=%d: %d realizations in %.1f s', users,
                    config.realizations, time.time() - start)
    return pd.concat(frames, ignore_index=True)


def summarize_run(df: pd.DataFrame) -> pd.DataFrame:
    """
    Mean and variance of the consumption columns per (K, solver) over the
    realizations kept, plus the number discarded.
    """
    metrics = ['p_tx', 'p_pas', 'p_bs', 'm_active', 'gain_pas', 'gain_bs']
    kept = df[~df['discarded']]
    summary = kept.groupby(['k_users', 'solver'], sort=False)[metrics]\
        .agg(['mean', 'var'])
    summary.columns = [f'{metric}_{stat}' for metric, stat
                       in summary.columns]
    counts = df.groupby(['k_users', 'solver'], sort=False)\
        .agg(realizations=('realization', 'count'),
             discarded=('discarded', 'sum'))
    return counts.join(summary).reset_index()


def convergence_experiment(config: ExperimentConfig,
                           threads: Optional[int] = None) -> pd.DataFrame:
    """
    Residual of the fixed point iteration, and its squared distance to the
    brute-force optimum when the instance fits the oracle guard, for every
    iteration of every realization.

    Without the oracle the ``distance_to_oracle`` column is omitted.
    """
    scenario = config.scenario
    threads = threads or config.threads
    m_max, k_max, q_max = scenario.oracle_guard()
    with_oracle = scenario.m_antennas <= m_max and \
        scenario.q_subcarriers <= q_max and \
        max(scenario.user_counts) <= k_max
    if not with_oracle:
        logger.warning('instance exceeds the oracle guard M<=%d K<=%d Q<=%d;'
                       ' running without distance to the oracle',
                       m_max, k_max, q_max)

    def realization(users, index):
        seed = scenario.seed + index
        rng = np.random.default_rng(seed)
        channel, qos = draw_scenario(scenario, users, rng)
        reference = None
        if with_oracle:
            try:
                reference = solve_min_pa_bruteforce(
                    channel, qos, scenario.pa, scenario.oracle_starts, rng,
                    scenario.oracle_guard()).powers
            except OracleSizeError as exc:
                logger.warning('%s', exc)
        rows = []

        def record(iteration, powers, residual):
            row = {'seed': seed, 'realization': index, 'k_users': users,
                   'iteration': iteration, 'residual': residual}
            if with_oracle:
                row['distance_to_oracle'] = float(
                    np.sum((powers - reference) ** 2)) \
                    if reference is not None else np.nan
            rows.append(row)

        solution = min_pa_precoder(channel, qos, scenario.fixed_point,
                                   callback=record)
        for row in rows:
            row['converged'] = solution.converged
        return rows

    frames = []
    for users in scenario.user_counts:
        rows = map_realizations(lambda index: realization(users, index),
                                config.realizations, threads)
        frame = pd.DataFrame(rows)
        last = frame.groupby('realization')['iteration'].max()
        logger.info('K=%d: mean %.1f iterations over %d realizations',
                    users, last.mean(), config.realizations)
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


def _user_drop(scenario: ScenarioConfig, users: int, index: int):
    rng = np.random.default_rng(scenario.seed + index)
    beta = large_scale_fading(draw_user_distances(users, scenario.geometry,
                                                  rng))
    return beta, target_sinr(beta, scenario.sinr_reference)


def asymptotic_experiment(config: ExperimentConfig,
                          threads: Optional[int] = None) -> pd.DataFrame:
    """
    Optimal antenna count and predicted consumption for every K of the
    sweep, averaged over user drops.

    For each drop the asymptotic BS consumption is evaluated with all M
    antennas, with K + 1 antennas and with the optimal count M_a-dagger;
    the gains are ratios of those, and the shares split the all-M
    consumption into PAs, circuits and fixed part. Drops violating the
    per-antenna limit are counted in ``infeasible`` and left out.
    """
    scenario = config.scenario
    threads = threads or config.threads
    antennas = scenario.m_antennas
    pa, bs = scenario.pa, scenario.bs

    def realization(users, index):
        beta, gamma = _user_drop(scenario, users, index)
        trace = trace_term(beta, gamma, scenario.noise_power)
        row = {'realization': index, 'k_users': users, 'trace_term': trace}
        try:
            plan = optimal_ma_constrained(antennas, users, trace, pa, bs)
        except InfeasibleScenarioError as exc:
            logger.debug('drop %d K=%d infeasible: %s', index, users, exc)
            row['feasible'] = False
            return [row]
        p_all = asymptotic_bs_power(antennas, users, trace, pa, bs)
        p_min = asymptotic_bs_power(users + 1, users, trace, pa, bs)
        shares = np.array(asymptotic_bs_breakdown(antennas, users, trace,
                                                  pa, bs)) / p_all
        row.update({
            'feasible': True,
            'm_tilde': plan.m_tilde,
            'm_hat': plan.m_hat,
            'm_dagger': plan.m_dagger,
            'p_bs_all': p_all,
            'p_bs_k_plus_1': p_min,
            'p_bs_optimal': plan.p_bs_bar,
            'gain_vs_all': p_all / plan.p_bs_bar,
            'gain_vs_k_plus_1': p_min / plan.p_bs_bar,
            'share_pa': shares[0],
            'share_circuit': shares[1],
            'share_fixed': shares[2],
        })
        return [row]

    rows = []
    for users in scenario.user_counts:
        drops = pd.DataFrame(map_realizations(
            lambda index: realization(users, index),
            config.realizations, threads))
        feasible = drops[drops['feasible']]
        infeasible = int((~drops['feasible']).sum())
        if infeasible:
            logger.warning('K=%d: %d of %d drops violate p_max with M=%d',
                           users, infeasible, len(drops), antennas)
        summary = {'k_users': users, 'm_antennas': antennas,
                   'realizations': len(drops), 'infeasible': infeasible,
                   'trace_term_mean': drops['trace_term'].mean()}
        for column in ('m_tilde', 'm_hat', 'm_dagger', 'p_bs_all',
                       'p_bs_k_plus_1', 'p_bs_optimal', 'gain_vs_all',
                       'gain_vs_k_plus_1', 'share_pa', 'share_circuit',
                       'share_fixed'):
            summary[f'{column}_mean'] = feasible[column].mean() \
                if column in feasible else np.nan
        summary['m_dagger_var'] = feasible['m_dagger'].var() \
            if 'm_dagger' in feasible else np.nan
        rows.append(summary)
    return pd.DataFrame(rows)


def consumption_curve(config: ExperimentConfig) -> pd.DataFrame:
    """
    Asymptotic BS consumption against the number of active antennas,
    K + 1 <= M_a <= M, averaged over user drops.
    """
    scenario = config.scenario
    rows = []
    for users in scenario.user_counts:
        traces = [trace_term(*_user_drop(scenario, users, index),
                             scenario.noise_power)
                  for index in range(config.realizations)]
        for m_active in range(users + 1, scenario.m_antennas + 1):
            values = [asymptotic_bs_power(m_active, users, trace,
                                          scenario.pa, scenario.bs)
                      for trace in traces]
            rows.append({'k_users': users, 'm_active': m_active,
                         'p_bs_mean': float(np.mean(values))})
    return pd.DataFrame(rows)


def finite_q_experiment(config: ExperimentConfig,
                        subcarriers: Iterable[int],
                        threads: Optional[int] = None) -> pd.DataFrame:
    """
    Gap between the simulated PA consumption of the fixed point precoder
    with Q subcarriers and its Q -> inf prediction with all M antennas.

    :return: one row per (K, Q) with mean and variance of the absolute gap
    """
    scenario = config.scenario
    threads = threads or config.threads

    def realization(users, q, index):
        channel, qos = draw_scenario(
            scenario, users, np.random.default_rng(scenario.seed + index),
            subcarriers=q)
        solution = min_pa_precoder(channel, qos, scenario.fixed_point)
        simulated = bs_consumed_power(solution.powers, scenario.pa,
                                      scenario.bs).p_pas
        predicted = asymptotic_pa_power(
            scenario.m_antennas, users,
            trace_term(channel.large_scale, qos.gamma, qos.noise_power),
            scenario.pa)
        return [{'simulated': simulated, 'predicted': predicted,
                 'error': abs(simulated - predicted)}]

    rows = []
    for users in scenario.user_counts:
        for q in subcarriers:
            frame = pd.DataFrame(map_realizations(
                lambda index: realization(users, q, index),
                config.realizations, threads))
            rows.append({'k_users': users, 'q_subcarriers': q,
                         'realizations': len(frame),
                         'p_pas_simulated_mean': frame['simulated'].mean(),
                         'p_pas_predicted_mean': frame['predicted'].mean(),
                         'error_mean': frame['error'].mean(),
                         'error_var': frame['error'].var()})
            logger.info('K=%d Q=%d: mean |p_PAs - prediction| = %.4g W',
                        users, q, rows[-1]['error_mean'])
    return pd.DataFrame(rows)


def write_csv(df: pd.DataFrame, path: str) -> None:
    """Write with a header and 9 significant digits."""
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.info('wrote %d rows to %s', len(df), path)
