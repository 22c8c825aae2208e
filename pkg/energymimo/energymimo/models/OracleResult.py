from dataclasses import dataclass
from enum import Enum

import numpy as np


class OracleMethod(Enum):
    NULLSPACE_DESCENT = 'nullspace_descent'
    ANALYTIC = 'analytic'


@dataclass(frozen=True, eq=False)
class OracleResult:
    """
    :ivar powers: per-antenna powers of the oracle optimum
    :ivar objective: PA consumption alpha * sum p_m^(1/2)
    :ivar method: how the optimum was obtained
    :ivar zf_residual: max violation of the ZF constraint
    :ivar gradient_norm: final gradient norm of the descent
    """
    powers: np.ndarray
    objective: float
    method: OracleMethod
    zf_residual: float
    gradient_norm: float
