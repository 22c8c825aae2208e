import logging

from ...models import ExperimentConfig
from ...utils.experiments import run_experiment, summarize_run
from ..base import ExperimentCommand

logger = logging.getLogger(__name__)


class Command(ExperimentCommand):
    help = ('Monte-Carlo comparison of the selected precoders: one CSV row '
            'per realization and solver, plus a <stem>_summary.csv of the '
            'kept realizations.')
    default_stem = 'run'

    def run_experiment(self, config: ExperimentConfig, path: str) -> None:
        df = run_experiment(config, config.threads)
        summary = summarize_run(df)
        for row in summary.itertuples():
            logger.info('K=%d %-13s p_bs=%.4g W gain_pas=%.3f gain_bs=%.3f '
                        '(%d discarded)', row.k_users, row.solver,
                        row.p_bs_mean, row.gain_pas_mean, row.gain_bs_mean,
                        row.discarded)
        self.write(df, path)
        self.write(summary, self.sibling_path(path, 'summary'))
        self.stdout.write(self.style.SUCCESS(f'wrote {path}'))
