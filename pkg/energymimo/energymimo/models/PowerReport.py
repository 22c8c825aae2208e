from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True)
class PowerReport:
    """
    Power accounting of one precoder solution.

    :ivar per_antenna: transmit power of every antenna, Watts
    :ivar p_tx: total transmit power
    :ivar p_pas: power consumed by the PAs
    :ivar p_bs: power consumed by the whole base station
    :ivar m_active: number of antennas above the activity threshold
    :ivar shares: fractions of p_bs spent in (PAs, circuits, fixed)
    """
    per_antenna: Tuple[float, ...]
    p_tx: float
    p_pas: float
    p_bs: float
    m_active: int
    shares: Tuple[float, float, float]

    @property
    def p_circuit(self) -> float:
        return self.shares[1] * self.p_bs
