from dataclasses import dataclass, field
from typing import Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class PrecoderSolution:
    """
    Precoding matrices and the antenna powers they produce.

    :ivar matrices: complex array (Q, M, K) holding W_q
    :ivar powers: per-antenna transmit power p_m, length M
    :ivar iterations: fixed point iterations spent (0 for closed forms)
    :ivar converged: whether the stopping rule was met
    :ivar residual: last max absolute inter-iteration power change
    :ivar active_set: indices of antennas above the activity threshold
    :ivar residual_history: residual after every iteration
    """
    matrices: np.ndarray
    powers: np.ndarray
    iterations: int = 0
    converged: bool = True
    residual: float = 0.0
    active_set: Tuple[int, ...] = ()
    residual_history: Tuple[float, ...] = field(default=(), repr=False)

    @property
    def antennas(self) -> int:
        return self.matrices.shape[1]
