from ...models import ExperimentConfig
from ...utils.experiments import convergence_experiment
from ..base import ExperimentCommand


class Command(ExperimentCommand):
    help = ('Per-iteration residual of the fixed point precoder and its '
            'squared distance to the brute-force optimum.')
    default_stem = 'convergence'

    def run_experiment(self, config: ExperimentConfig, path: str) -> None:
        df = convergence_experiment(config, config.threads)
        self.write(df, path)
        self.stdout.write(self.style.SUCCESS(f'wrote {path}'))
