from dataclasses import dataclass

from ..exceptions import PowerDomainError
from .constants import U_MIN_M, U_MAX_M


@dataclass(frozen=True)
class CellGeometry:
    """Annular cell: users lie between `u_min` and `u_max` meters from the
    base station, uniformly over the area."""
    u_min: float = U_MIN_M
    u_max: float = U_MAX_M

    def __post_init__(self):
        if not 0 < self.u_min < self.u_max:
            raise PowerDomainError(
                f'cell radii must satisfy 0 < u_min < u_max, got '
                f'u_min={self.u_min}, u_max={self.u_max}')
