import os
import copy

from .common import Common


class FullScale(Common):
    """Full-size reproduction: 2000 realizations, log to file only."""
    ENERGYMIMO_REALIZATIONS = int(
        os.getenv('ENERGYMIMO_REALIZATIONS', '2000'))

    LOGGING = copy.deepcopy(Common.LOGGING)
    LOGGING['loggers']['energymimo.energymimo.utils']['handlers'] = ['file']
    LOGGING['loggers']['energymimo.energymimo.management']['handlers'] = \
        ['file']
