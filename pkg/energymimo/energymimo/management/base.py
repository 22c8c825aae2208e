"""
.. module:: base
   :synopsis: Shared flags and error handling of the experiment commands.

Exit codes: 0 success, 1 configuration or I/O error, 2 infeasible scenario,
3 failed validation.
"""
import logging
import os

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from ..exceptions import (DimensionError, InfeasibleScenarioError,
                          PowerDomainError, ScenarioConfigError)
from ..models import ExperimentConfig
from ..utils.experiments import write_csv
from ..utils.scenario_config import load_experiment_config, with_overrides

logger = logging.getLogger(__name__)

CONFIG_ERROR = 1
INFEASIBLE = 2
VALIDATION_FAILED = 3


class ExperimentCommand(BaseCommand):
    """
    Base class: parses --config/--out/--seed/--realizations/--threads,
    resolves the experiment and maps library errors to exit codes.
    Subclasses implement :meth:`run_experiment`.
    """
    default_stem = 'results'
    #: antennas needed beyond K; 1 where M_a > K is required
    spare_antennas = 0

    def add_arguments(self, parser):
        parser.add_argument('--config', default=None,
                            help='key=value experiment file; defaults to '
                                 'the reference scenario')
        parser.add_argument('--out', default=None,
                            help='CSV output path')
        parser.add_argument('--seed', type=int, default=None,
                            help='master seed, overrides the config')
        parser.add_argument('--realizations', type=int, default=None,
                            help='Monte-Carlo realizations, overrides the '
                                 'config')
        parser.add_argument('--threads', type=int, default=None,
                            help='worker threads; falls back to '
                                 'ENERGYMIMO_THREADS, then the config')

    def resolve_experiment(self, options) -> ExperimentConfig:
        config = load_experiment_config(
            options.get('config'),
            default_realizations=settings.ENERGYMIMO_REALIZATIONS)
        threads = options.get('threads') or settings.ENERGYMIMO_THREADS
        return with_overrides(config,
                              seed=options.get('seed'),
                              realizations=options.get('realizations'),
                              threads=threads,
                              output_path=options.get('out'))

    def check_scenario(self, config: ExperimentConfig) -> None:
        antennas = config.scenario.m_antennas
        for users in config.scenario.user_counts:
            if antennas < users + self.spare_antennas:
                raise InfeasibleScenarioError(
                    f'M={antennas} antennas cannot serve K={users} users',
                    min_antennas=users + self.spare_antennas)

    def output_path(self, config: ExperimentConfig) -> str:
        if config.output_path:
            return config.output_path
        return os.path.join(settings.ENERGYMIMO_OUTPUT_DIR,
                            f'{self.default_stem}.csv')

    def sibling_path(self, path: str, suffix: str) -> str:
        """``results.csv`` -> ``results_<suffix>.csv``"""
        stem, extension = os.path.splitext(path)
        return f'{stem}_{suffix}{extension or ".csv"}'

    def write(self, df, path: str) -> None:
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            write_csv(df, path)
        except OSError as exc:
            logger.error('cannot write %s: %s', path, exc)
            raise CommandError(f'cannot write {path}: {exc}',
                               returncode=CONFIG_ERROR) from exc

    def handle(self, *args, **options):
        try:
            config = self.resolve_experiment(options)
            self.check_scenario(config)
            self.run_experiment(config, self.output_path(config))
        except (ScenarioConfigError, PowerDomainError,
                DimensionError) as exc:
            logger.error('configuration error: %s', exc)
            raise CommandError(str(exc), returncode=CONFIG_ERROR) from exc
        except InfeasibleScenarioError as exc:
            logger.error('infeasible scenario: %s', exc)
            raise CommandError(str(exc), returncode=INFEASIBLE) from exc

    def run_experiment(self, config: ExperimentConfig, path: str) -> None:
        raise NotImplementedError
