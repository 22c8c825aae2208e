"""
.. module:: ScenarioConfig
   :synopsis: Physical parameters of one simulated cell.

Defaults reproduce the reference scenario: 1 W maximal PA power, 22% PA
efficiency at that power, 10 dB back-off, -96 dBm noise, 15 W fixed and
0.7 W per-antenna circuit consumption, users between 35 and 250 m.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple

from ..exceptions import PowerDomainError
from .BsModel import BsModel
from .CellGeometry import CellGeometry
from .ChannelRealization import ChannelKind
from .FixedPointConfig import FixedPointConfig
from .PaModel import PaModel
from .constants import (NOISE_DBM, SINR_REFERENCE, CORRELATION_TAPS,
                        CORRELATION_DECAY, ORACLE_STARTS, ORACLE_MAX_M,
                        ORACLE_MAX_K, ORACLE_MAX_Q)


def dbm_to_watts(dbm: float) -> float:
    return 10 ** ((dbm - 30) / 10)


@dataclass(frozen=True)
class ScenarioConfig:
    """
    :ivar m_antennas: number of base-station antennas M
    :ivar k_users: number of users K, used when `k_sweep` is empty
    :ivar k_sweep: user counts to sweep over, in order
    :ivar q_subcarriers: number of subcarriers Q
    :ivar q_sweep: subcarrier counts for finite-Q comparisons
    :ivar noise_power: noise variance in Watts
    :ivar correlation_taps: taps of the power-delay profile, used only when
        `frequency_correlation` is set
    """
    m_antennas: int = 32
    k_users: int = 4
    k_sweep: Tuple[int, ...] = ()
    q_subcarriers: int = 1
    q_sweep: Tuple[int, ...] = ()
    pa: PaModel = field(default_factory=PaModel.from_p_max)
    bs: BsModel = field(default_factory=BsModel)
    geometry: CellGeometry = field(default_factory=CellGeometry)
    noise_power: float = dbm_to_watts(NOISE_DBM)
    sinr_reference: float = SINR_REFERENCE
    channel_kind: ChannelKind = ChannelKind.RAYLEIGH
    los_random_phase: bool = True
    frequency_correlation: bool = False
    correlation_taps: int = CORRELATION_TAPS
    correlation_decay: float = CORRELATION_DECAY
    seed: int = 0
    fixed_point: FixedPointConfig = field(default_factory=FixedPointConfig)
    oracle_starts: int = ORACLE_STARTS
    oracle_max_m: int = ORACLE_MAX_M
    oracle_max_k: int = ORACLE_MAX_K
    oracle_max_q: int = ORACLE_MAX_Q

    def __post_init__(self):
        if self.m_antennas < 1:
            raise PowerDomainError(
                f'm_antennas must be >= 1, got {self.m_antennas}')
        for k in self.user_counts:
            if k < 1:
                raise PowerDomainError(f'user counts must be >= 1, got {k}')
        for q in (self.q_subcarriers,) + tuple(self.q_sweep):
            if q < 1:
                raise PowerDomainError(
                    f'subcarrier counts must be >= 1, got {q}')
        if not self.noise_power > 0:
            raise PowerDomainError(
                f'noise_power must be positive, got {self.noise_power}')
        if not self.sinr_reference > 0:
            raise PowerDomainError('sinr_reference must be positive')
        if self.correlation_taps < 1:
            raise PowerDomainError('correlation_taps must be >= 1')
        if self.correlation_decay < 0:
            raise PowerDomainError('correlation_decay must be >= 0')
        if self.oracle_starts < 1:
            raise PowerDomainError('oracle_starts must be >= 1')

    @property
    def user_counts(self) -> Tuple[int, ...]:
        """The K values this scenario covers."""
        return tuple(self.k_sweep) or (self.k_users,)

    @property
    def p_max(self) -> float:
        return self.pa.p_max

    def oracle_guard(self) -> Tuple[int, int, int]:
        return self.oracle_max_m, self.oracle_max_k, self.oracle_max_q


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A scenario plus the Monte-Carlo settings of one harness run.

    :ivar precoders: solver names, a subset of
        ``zf, min_pa, saturating, asymptotic_zf``
    :ivar discard_over_pmax: drop realizations where a solver that ignores
        the per-antenna power limit (zf, min_pa) exceeds it
    :ivar threads: worker threads, None lets the caller decide
    """
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    realizations: int = 200
    precoders: Tuple[str, ...] = ('zf', 'min_pa')
    discard_over_pmax: bool = True
    output_path: Optional[str] = None
    threads: Optional[int] = None

    def __post_init__(self):
        if self.realizations < 1:
            raise PowerDomainError(
                f'realizations must be >= 1, got {self.realizations}')
        if not self.precoders:
            raise PowerDomainError('at least one precoder is required')
        if self.threads is not None and self.threads < 1:
            raise PowerDomainError(f'threads must be >= 1, got {self.threads}')
