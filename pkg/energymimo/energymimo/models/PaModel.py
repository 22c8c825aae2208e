"""
.. module:: PaModel
   :synopsis: Square-root-efficiency power amplifier model.

The efficiency of a class-B-like amplifier grows as the square root of its
output power, reaching `eta_sat` at saturation. Operating with a back-off
caps the usable output at `p_max = p_sat / backoff`, where the efficiency
is `eta_max`. The consumed power of one PA is then `alpha * p**(1/2)` with
`alpha = p_max**(1/2) / eta_max`.
"""
import math
from dataclasses import dataclass

from ..exceptions import PowerDomainError
from .constants import P_MAX_WATTS, ETA_MAX, BACKOFF_DB


@dataclass(frozen=True)
class PaModel:
    """
    :ivar p_sat: saturation power in Watts
    :ivar backoff: linear back-off ratio, >= 1
    :ivar eta_max: efficiency at `p_max`, in (0, 1]
    """
    p_sat: float
    backoff: float
    eta_max: float

    def __post_init__(self):
        if not self.p_sat > 0:
            raise PowerDomainError(f'p_sat must be positive, got {self.p_sat}')
        if not self.backoff >= 1:
            raise PowerDomainError(
                f'backoff must be a linear ratio >= 1, got {self.backoff}')
        if not 0 < self.eta_max <= 1:
            raise PowerDomainError(
                f'eta_max must lie in (0, 1], got {self.eta_max}')

    @classmethod
    def from_p_max(cls, p_max: float = P_MAX_WATTS,
                   eta_max: float = ETA_MAX,
                   backoff: float = 10 ** (BACKOFF_DB / 10)) -> 'PaModel':
        """Build the model from the maximal (backed-off) PA power."""
        return cls(p_sat=p_max * backoff, backoff=backoff, eta_max=eta_max)

    @property
    def p_max(self) -> float:
        return self.p_sat / self.backoff

    @property
    def alpha(self) -> float:
        """Scaling between sum of square-root powers and consumed power."""
        return math.sqrt(self.p_max) / self.eta_max

    @property
    def eta_sat(self) -> float:
        """Efficiency at saturation, derived from eta_max and the back-off."""
        return self.eta_max * math.sqrt(self.backoff)
