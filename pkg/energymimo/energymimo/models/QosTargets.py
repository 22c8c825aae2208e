"""
.. module:: QosTargets
   :synopsis: Per-user SINR targets and noise level.

The targets are spread over the subcarriers: each subcarrier of user k must
reach gamma_k / Q, which keeps the user rate bounded as Q grows.
"""
from dataclasses import dataclass

import numpy as np

from ..exceptions import PowerDomainError


@dataclass(frozen=True, eq=False)
class QosTargets:
    """
    :ivar gamma: linear SINR targets, one per user
    :ivar noise_power: noise variance sigma_nu^2 in Watts
    :ivar subcarriers: number of subcarriers Q
    """
    gamma: np.ndarray
    noise_power: float
    subcarriers: int = 1

    def __post_init__(self):
        gamma = np.atleast_1d(np.asarray(self.gamma, dtype=float))
        if gamma.ndim != 1 or gamma.size == 0:
            raise PowerDomainError('gamma must be a non-empty vector')
        if np.any(gamma <= 0):
            raise PowerDomainError(f'SINR targets must be positive: {gamma}')
        if not self.noise_power > 0:
            raise PowerDomainError(
                f'noise_power must be positive, got {self.noise_power}')
        if self.subcarriers < 1:
            raise PowerDomainError(
                f'subcarriers must be >= 1, got {self.subcarriers}')
        gamma.setflags(write=False)
        object.__setattr__(self, 'gamma', gamma)

    @property
    def users(self) -> int:
        return self.gamma.size

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.noise_power))

    @property
    def normalized_gamma(self) -> np.ndarray:
        """gamma_k / Q"""
        return self.gamma / self.subcarriers

    @property
    def zf_targets(self) -> np.ndarray:
        """Diagonal of the ZF right-hand side, (gamma_k / Q)^(1/2) sigma."""
        return np.sqrt(self.normalized_gamma) * self.sigma
