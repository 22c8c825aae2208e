import logging
from dataclasses import asdict

import pandas as pd
from django.core.management.base import CommandError

from ...models import ExperimentConfig
from ...utils.validation import run_validation
from ..base import ExperimentCommand, VALIDATION_FAILED

logger = logging.getLogger(__name__)


class Command(ExperimentCommand):
    help = ('Check the precoders and the antenna-count optimization against '
            'the independent oracles; exits with code 3 on any failure.')
    default_stem = 'validate'

    def run_experiment(self, config: ExperimentConfig, path: str) -> None:
        results = run_validation(config)
        self.write(pd.DataFrame([asdict(r) for r in results]), path)
        failed = [r.name for r in results if not r.passed]
        for result in results:
            style = self.style.SUCCESS if result.passed else self.style.ERROR
            self.stdout.write(style(
                f'{result.name}: {"pass" if result.passed else "FAIL"} '
                f'({result.detail})'))
        if failed:
            logger.error('validation failed: %s', ', '.join(failed))
            raise CommandError(f'failed checks: {", ".join(failed)}',
                               returncode=VALIDATION_FAILED)
