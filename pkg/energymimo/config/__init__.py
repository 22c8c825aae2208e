from .local import Local  # noqa
from .full_scale import FullScale  # noqa
