"""
.. module:: ChannelRealization
   :synopsis: One draw of the per-subcarrier downlink channel.

.. note:: `per_subcarrier` has shape (Q, K, M): subcarrier, user, antenna.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..exceptions import DimensionError


class ChannelKind(Enum):
    RAYLEIGH = 'rayleigh'
    LOS = 'los'


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """
    :ivar per_subcarrier: complex array (Q, K, M) holding H_q
    :ivar large_scale: positive large-scale fading beta_k, length K
    :ivar kind: rayleigh or pure line-of-sight
    """
    per_subcarrier: np.ndarray
    large_scale: np.ndarray
    kind: ChannelKind = ChannelKind.RAYLEIGH

    def __post_init__(self):
        h = np.asarray(self.per_subcarrier, dtype=complex)
        if h.ndim == 2:
            h = h[np.newaxis, ...]
        if h.ndim != 3:
            raise DimensionError(
                f'channel must have shape (Q, K, M), got {h.shape}')
        beta = np.atleast_1d(np.asarray(self.large_scale, dtype=float))
        if beta.shape != (h.shape[1],):
            raise DimensionError(
                f'large_scale has shape {beta.shape}, expected '
                f'({h.shape[1]},)')
        object.__setattr__(self, 'per_subcarrier', h)
        object.__setattr__(self, 'large_scale', beta)

    @property
    def subcarriers(self) -> int:
        return self.per_subcarrier.shape[0]

    @property
    def users(self) -> int:
        return self.per_subcarrier.shape[1]

    @property
    def antennas(self) -> int:
        return self.per_subcarrier.shape[2]
