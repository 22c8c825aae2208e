import logging

from ...models import ExperimentConfig
from ...utils.experiments import (asymptotic_experiment, consumption_curve,
                                  finite_q_experiment)
from ..base import ExperimentCommand

logger = logging.getLogger(__name__)


class Command(ExperimentCommand):
    help = ('Optimal number of active antennas and asymptotic consumption '
            'over the K sweep. Also writes <stem>_curve.csv and, when '
            'q_sweep is set, <stem>_finite_q.csv.')
    default_stem = 'asymptotic'
    spare_antennas = 1

    def run_experiment(self, config: ExperimentConfig, path: str) -> None:
        sweep = asymptotic_experiment(config, config.threads)
        self.write(sweep, path)
        self.write(consumption_curve(config),
                   self.sibling_path(path, 'curve'))
        if config.scenario.q_sweep:
            finite_q = finite_q_experiment(config, config.scenario.q_sweep,
                                           config.threads)
            self.write(finite_q, self.sibling_path(path, 'finite_q'))
        else:
            logger.info('q_sweep not set, skipping the finite-Q comparison')
        self.stdout.write(self.style.SUCCESS(f'wrote {path}'))
