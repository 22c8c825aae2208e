"""Whole base-station consumption model: PAs + fixed + per-antenna circuits"""
from dataclasses import dataclass

from ..exceptions import PowerDomainError
from .constants import (P_FIX_WATTS, CIRCUIT_WATTS,
                        ACTIVE_POWER_THRESHOLD_WATTS)


@dataclass(frozen=True)
class BsModel:
    """
    :ivar p_fix: static consumption in Watts
    :ivar circuit_per_antenna: consumption of one active RF chain and its
        share of baseband processing, in Watts
    :ivar active_power_threshold: output power at or below which an antenna
        counts as switched off
    """
    p_fix: float = P_FIX_WATTS
    circuit_per_antenna: float = CIRCUIT_WATTS
    active_power_threshold: float = ACTIVE_POWER_THRESHOLD_WATTS

    def __post_init__(self):
        for name in ('p_fix', 'circuit_per_antenna',
                     'active_power_threshold'):
            if not getattr(self, name) >= 0:
                raise PowerDomainError(
                    f'{name} must be non-negative, got {getattr(self, name)}')
