"""
.. module:: scenario_config
   :synopsis: Parse flat key=value experiment files.

An experiment file holds one ``key=value`` per line, with ``#`` comments,
in the syntax of a ``.env`` file; python-dotenv tokenizes it so every
binding keeps its line number for error messages. Omitted keys take the
reference-scenario defaults. dB values (``backoff_db``, ``noise_dbm``) are
converted to linear units here and nowhere else.

Example::

    # narrowband sweep
    m_antennas=64
    k_sweep=1-8
    precoders=zf,min_pa
"""
import io
import logging
from dataclasses import replace
from typing import Callable, Dict, Optional, Tuple

from dotenv.parser import parse_stream

from ..exceptions import PowerDomainError, ScenarioConfigError
from ..models import (BsModel, CellGeometry, ChannelKind, ExperimentConfig,
                      FixedPointConfig, PaModel, ScenarioConfig,
                      dbm_to_watts)
from ..models.constants import (P_MAX_WATTS, ETA_MAX, BACKOFF_DB, NOISE_DBM,
                                REALIZATIONS)

logger = logging.getLogger(__name__)

SOLVERS = ('zf', 'min_pa', 'saturating', 'asymptotic_zf')


def parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(f'expected a boolean, got {value!r}')


def parse_counts(value: str) -> Tuple[int, ...]:
    """``1-40`` or ``1,2,4`` (or a mix, ``1-4,8``) to a tuple of ints"""
    counts = []
    for part in value.split(','):
        part = part.strip()
        if not part:
            continue
        if '-' in part:
            first, last = (int(x) for x in part.split('-', 1))
            if last < first:
                raise ValueError(f'empty range {part!r}')
            counts.extend(range(first, last + 1))
        else:
            counts.append(int(part))
    if not counts:
        raise ValueError('expected at least one count')
    return tuple(counts)


def parse_precoders(value: str) -> Tuple[str, ...]:
    names = tuple(n.strip() for n in value.split(',') if n.strip())
    unknown = [n for n in names if n not in SOLVERS]
    if unknown or not names:
        raise ValueError(
            f'unknown precoders {unknown}, choose from {", ".join(SOLVERS)}')
    return names


def parse_channel_kind(value: str) -> ChannelKind:
    return ChannelKind(value.strip().lower())


PARSERS: Dict[str, Callable[[str], object]] = {
    'm_antennas': int,
    'k_users': int,
    'k_sweep': parse_counts,
    'q_subcarriers': int,
    'q_sweep': parse_counts,
    'channel_kind': parse_channel_kind,
    'los_random_phase': parse_bool,
    'frequency_correlation': parse_bool,
    'correlation_taps': int,
    'correlation_decay': float,
    'seed': int,
    'realizations': int,
    'precoders': parse_precoders,
    'discard_over_pmax': parse_bool,
    'output_path': str,
    'p_max_watts': float,
    'eta_max': float,
    'backoff_db': float,
    'noise_dbm': float,
    'p_fix_watts': float,
    'circuit_watts': float,
    'active_power_threshold_watts': float,
    'u_min_m': float,
    'u_max_m': float,
    'sinr_reference': float,
    'fp_tolerance': float,
    'fp_max_iterations': int,
    'fp_initial_power': float,
    'fp_dead_antenna_floor': float,
    'fp_regularization': float,
    'oracle_starts': int,
    'oracle_max_m': int,
    'oracle_max_k': int,
    'oracle_max_q': int,
    'threads': int,
}


def _binding_line(binding) -> int:
    # blank lines before a binding are part of its original text
    text = binding.original.string
    leading = text[:len(text) - len(text.lstrip())]
    return binding.original.line + leading.count('\n')


def parse_bindings(text: str) -> Dict[str, Tuple[object, int]]:
    """
    Tokenize and type-convert a config text.

    :return: key -> (value, 1-based line)
    :raises ScenarioConfigError: on malformed lines, unknown or repeated
        keys and unparseable values
    """
    values = {}
    for binding in parse_stream(io.StringIO(text)):
        line = _binding_line(binding)
        if binding.error:
            raise ScenarioConfigError(
                f'cannot parse {binding.original.string.strip()!r}',
                line=line)
        if binding.key is None:
            continue
        key = binding.key.strip().lower()
        if key not in PARSERS:
            raise ScenarioConfigError(f'unknown key {key!r}', line=line)
        if key in values:
            raise ScenarioConfigError(
                f'{key!r} already set on line {values[key][1]}', line=line)
        if binding.value is None or not binding.value.strip():
            raise ScenarioConfigError(f'{key!r} has no value', line=line)
        try:
            values[key] = (PARSERS[key](binding.value), line)
        except ValueError as exc:
            raise ScenarioConfigError(f'{key}: {exc}', line=line) from exc
    return values


def build_experiment_config(values: Dict[str, Tuple[object, int]],
                            default_realizations: int = REALIZATIONS) \
        -> ExperimentConfig:
    """Assemble the domain configuration from parsed bindings."""
    def get(key, default=None):
        return values[key][0] if key in values else default

    def build(key_hint, factory, **kwargs):
        try:
            return factory(**kwargs)
        except PowerDomainError as exc:
            line = next((values[k][1] for k in key_hint if k in values),
                        None)
            raise ScenarioConfigError(str(exc), line=line) from exc

    pa = build(('p_max_watts', 'eta_max', 'backoff_db'),
               PaModel.from_p_max,
               p_max=get('p_max_watts', P_MAX_WATTS),
               eta_max=get('eta_max', ETA_MAX),
               backoff=10 ** (get('backoff_db', BACKOFF_DB) / 10))
    bs_defaults = BsModel()
    bs = build(('p_fix_watts', 'circuit_watts',
                'active_power_threshold_watts'), BsModel,
               p_fix=get('p_fix_watts', bs_defaults.p_fix),
               circuit_per_antenna=get('circuit_watts',
                                       bs_defaults.circuit_per_antenna),
               active_power_threshold=get(
                   'active_power_threshold_watts',
                   bs_defaults.active_power_threshold))
    geometry_defaults = CellGeometry()
    geometry = build(('u_min_m', 'u_max_m'), CellGeometry,
                     u_min=get('u_min_m', geometry_defaults.u_min),
                     u_max=get('u_max_m', geometry_defaults.u_max))
    fp_defaults = FixedPointConfig()
    fixed_point = build(
        tuple(k for k in PARSERS if k.startswith('fp_')), FixedPointConfig,
        tolerance=get('fp_tolerance', fp_defaults.tolerance),
        max_iterations=get('fp_max_iterations', fp_defaults.max_iterations),
        initial_power=get('fp_initial_power', fp_defaults.initial_power),
        dead_antenna_floor=get('fp_dead_antenna_floor',
                               fp_defaults.dead_antenna_floor),
        regularization=get('fp_regularization', fp_defaults.regularization))

    scenario_keys = {
        'm_antennas': 'm_antennas', 'k_users': 'k_users',
        'k_sweep': 'k_sweep', 'q_subcarriers': 'q_subcarriers',
        'q_sweep': 'q_sweep', 'channel_kind': 'channel_kind',
        'los_random_phase': 'los_random_phase',
        'frequency_correlation': 'frequency_correlation',
        'correlation_taps': 'correlation_taps',
        'correlation_decay': 'correlation_decay', 'seed': 'seed',
        'sinr_reference': 'sinr_reference',
        'oracle_starts': 'oracle_starts', 'oracle_max_m': 'oracle_max_m',
        'oracle_max_k': 'oracle_max_k', 'oracle_max_q': 'oracle_max_q',
    }
    scenario = build(
        tuple(scenario_keys) + ('noise_dbm',), ScenarioConfig,
        pa=pa, bs=bs, geometry=geometry, fixed_point=fixed_point,
        noise_power=dbm_to_watts(get('noise_dbm', NOISE_DBM)),
        **{field: values[key][0] for key, field in scenario_keys.items()
           if key in values})

    experiment_kwargs = {key: values[key][0] for key in
                         ('precoders', 'discard_over_pmax', 'output_path',
                          'threads') if key in values}
    return build(('realizations', 'precoders', 'threads'), ExperimentConfig,
                 scenario=scenario,
                 realizations=get('realizations', default_realizations),
                 **experiment_kwargs)


def parse_experiment_config(text: str,
                            default_realizations: int = REALIZATIONS) \
        -> ExperimentConfig:
    return build_experiment_config(parse_bindings(text),
                                   default_realizations)


def load_experiment_config(path: Optional[str],
                           default_realizations: int = REALIZATIONS) \
        -> ExperimentConfig:
    """
    Read an experiment file; None gives the all-defaults experiment.

    :raises ScenarioConfigError: if the file cannot be read or parsed
    """
    if path is None:
        return ExperimentConfig(realizations=default_realizations)
    try:
        with open(path, encoding='utf-8') as handle:
            text = handle.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ScenarioConfigError(f'cannot read {path}: {exc}') from exc
    config = parse_experiment_config(text, default_realizations)
    logger.info('loaded %s: M=%d K=%s Q=%d, %d realizations', path,
                config.scenario.m_antennas,
                ','.join(map(str, config.scenario.user_counts)),
                config.scenario.q_subcarriers, config.realizations)
    return config


def with_overrides(config: ExperimentConfig,
                   seed: Optional[int] = None,
                   realizations: Optional[int] = None,
                   threads: Optional[int] = None,
                   output_path: Optional[str] = None) -> ExperimentConfig:
    """Apply command-line values on top of a parsed config."""
    try:
        if seed is not None:
            config = replace(config,
                             scenario=replace(config.scenario, seed=seed))
        changes = {name: value for name, value in
                   (('realizations', realizations), ('threads', threads),
                    ('output_path', output_path)) if value is not None}
        return replace(config, **changes) if changes else config
    except PowerDomainError as exc:
        raise ScenarioConfigError(str(exc)) from exc
