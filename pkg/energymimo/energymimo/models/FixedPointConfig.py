from dataclasses import dataclass

from ..exceptions import PowerDomainError
from .constants import (FP_TOLERANCE, FP_MAX_ITERATIONS, FP_INITIAL_POWER,
                        FP_DEAD_ANTENNA_FLOOR, FP_REGULARIZATION,
                        FP_MAX_REGULARIZATION)


@dataclass(frozen=True)
class FixedPointConfig:
    """
    Stopping rule and numerical safeguards of the per-antenna power
    fixed point iteration.

    :ivar tolerance: stop once max_m |p_m^(i) - p_m^(i-1)| <= tolerance
    :ivar max_iterations: iteration budget
    :ivar initial_power: starting power of every antenna
    :ivar dead_antenna_floor: powers below this are clamped to zero and the
        antenna leaves the Gram solves
    :ivar regularization: ridge added to the Gram matrix, relative to its
        trace
    """
    tolerance: float = FP_TOLERANCE
    max_iterations: int = FP_MAX_ITERATIONS
    initial_power: float = FP_INITIAL_POWER
    dead_antenna_floor: float = FP_DEAD_ANTENNA_FLOOR
    regularization: float = FP_REGULARIZATION

    def __post_init__(self):
        if not self.tolerance > 0:
            raise PowerDomainError(
                f'tolerance must be positive, got {self.tolerance}')
        if self.max_iterations < 1:
            raise PowerDomainError(
                f'max_iterations must be >= 1, got {self.max_iterations}')
        if not self.initial_power > 0:
            raise PowerDomainError(
                f'initial_power must be positive, got {self.initial_power}')
        if self.dead_antenna_floor < 0:
            raise PowerDomainError('dead_antenna_floor must be >= 0')
        if not 0 <= self.regularization <= FP_MAX_REGULARIZATION:
            raise PowerDomainError(
                f'regularization must lie in [0, {FP_MAX_REGULARIZATION}], '
                f'got {self.regularization}')
