"""
.. module:: oracle
   :synopsis: Slow, independent solvers used as ground truth.

Nothing here reuses the precoding or asymptotic code paths:

- :func:`solve_min_pa_bruteforce` minimizes the PA consumption over the
  whole affine set of zero-forcing precoders with a generic quasi-Newton
  method
- :func:`mc_inverse_wishart_trace` estimates the expected trace of the
  inverse Gram matrix by plain Monte-Carlo
- :func:`grid_min_bs` finds the best antenna count by exhaustive search
- :func:`closed_form_quartic_roots` solves quartics by radicals
"""
import cmath
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize
from scipy.linalg import null_space

from ..exceptions import (InfeasibleScenarioError, OracleSizeError,
                          PowerDomainError, SingularChannelError)
from ..models import (BsModel, ChannelRealization, OracleMethod,
                      OracleResult, PaModel, QosTargets)
from ..models.constants import (ORACLE_STARTS, ORACLE_MAX_M, ORACLE_MAX_K,
                                ORACLE_MAX_Q, ORACLE_GRADIENT_TOLERANCE,
                                ORACLE_STEPS_PER_DIMENSION,
                                ORACLE_GRID_MAX_M)

logger = logging.getLogger(__name__)

# squared smoothing radii, relative to the largest ZF antenna power
SMOOTHING_SCHEDULE = (1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14)


class _SmoothedConsumption:
    """
    sum_m (p_m + mu^2)^(1/2) over precoders W_q = W0_q + N_q Z_q, as a
    function of the real and imaginary parts of all Z_q stacked in one
    vector.
    """

    def __init__(self, base: np.ndarray, basis: np.ndarray):
        self.base = base
        self.basis = basis
        self.shape = (basis.shape[0], basis.shape[2], base.shape[2])
        self.size = int(np.prod(self.shape))
        self.mu2 = SMOOTHING_SCHEDULE[0]

    @property
    def dimension(self) -> int:
        return 2 * self.size

    def precoders(self, x: np.ndarray) -> np.ndarray:
        z = x[:self.size].reshape(self.shape) \
            + 1j * x[self.size:].reshape(self.shape)
        return self.base + self.basis @ z

    def __call__(self, x: np.ndarray) -> Tuple[float, np.ndarray]:
        w = self.precoders(x)
        p = np.sum(np.abs(w) ** 2, axis=(0, 2))
        root = np.sqrt(p + self.mu2)
        weights = 0.5 / root
        g = np.conj(np.swapaxes(self.basis, 1, 2)) \
            @ (weights[np.newaxis, :, np.newaxis] * w)
        grad = 2 * np.concatenate([g.real.ravel(), g.imag.ravel()])
        return float(np.sum(root)), grad


def solve_min_pa_bruteforce(channel: ChannelRealization,
                            qos: QosTargets,
                            pa: Optional[PaModel] = None,
                            starts: int = ORACLE_STARTS,
                            rng: Optional[np.random.Generator] = None,
                            max_size: Tuple[int, int, int] = (
                                ORACLE_MAX_M, ORACLE_MAX_K, ORACLE_MAX_Q)) \
        -> OracleResult:
    """
    Minimize alpha sum_m p_m^(1/2) over every zero-forcing precoder.

    Feasible precoders are W_q = W_q^ZF + N_q Z_q with N_q an orthonormal
    basis of the null space of H_q. The objective is convex in the Z_q; it
    is smoothed to sum_m (p_m + mu^2)^(1/2) and minimized by L-BFGS while mu
    shrinks, from the ZF point and from `starts - 1` random points. The
    reported objective is the exact, unsmoothed consumption of the best
    final point.

    :param channel: small instance
    :type channel: ChannelRealization
    :param qos: SINR targets
    :type qos: QosTargets
    :param pa: PA model giving alpha, reference values when omitted
    :type pa: PaModel
    :param starts: number of descents
    :param rng: random source for the extra starts, seed 0 when omitted
    :param max_size: largest (M, K, Q) accepted

    :return: optimum and certificate
    :rtype: OracleResult

    :raises OracleSizeError: if the instance exceeds `max_size`
    """
    pa = pa or PaModel.from_p_max()
    rng = rng if rng is not None else np.random.default_rng(0)
    max_m, max_k, max_q = max_size
    if channel.antennas > max_m or channel.users > max_k \
            or channel.subcarriers > max_q:
        raise OracleSizeError(
            f'instance M={channel.antennas} K={channel.users} '
            f'Q={channel.subcarriers} exceeds the oracle guard '
            f'M<={max_m} K<={max_k} Q<={max_q}')
    if starts < 1:
        raise ValueError(f'starts must be >= 1, got {starts}')

    targets = np.diag(qos.zf_targets)
    zf = np.stack([np.linalg.pinv(h) @ targets
                   for h in channel.per_subcarrier])
    bases = [null_space(h) for h in channel.per_subcarrier]
    if len({b.shape[1] for b in bases}) != 1 \
            or bases[0].shape[1] != channel.antennas - channel.users:
        raise SingularChannelError('channel matrices are rank deficient')

    scale = math.sqrt(np.max(np.sum(np.abs(zf) ** 2, axis=(0, 2))))
    problem = _SmoothedConsumption(zf / scale, np.stack(bases))

    if problem.size == 0:
        best_x = np.zeros(0)
        gradient_norm = 0.0
        method = OracleMethod.ANALYTIC
    else:
        method = OracleMethod.NULLSPACE_DESCENT
        best_x, best_value, gradient_norm = None, np.inf, np.inf
        for start in range(starts):
            x = np.zeros(problem.dimension) if start == 0 \
                else rng.standard_normal(problem.dimension)
            for mu2 in SMOOTHING_SCHEDULE:
                problem.mu2 = mu2
                result = optimize.minimize(
                    problem, x, jac=True, method='L-BFGS-B',
                    options={'gtol': ORACLE_GRADIENT_TOLERANCE,
                             'ftol': 1e-15,
                             'maxiter': ORACLE_STEPS_PER_DIMENSION
                             * problem.dimension})
                x = result.x
            p = np.sum(np.abs(problem.precoders(x)) ** 2, axis=(0, 2))
            value = float(np.sum(np.sqrt(p)))
            logger.debug('oracle start %d: objective %.9g, |grad| %.2e',
                         start, value, np.linalg.norm(result.jac))
            if value < best_value:
                best_x, best_value = x, value
                gradient_norm = float(np.linalg.norm(result.jac))

    w = problem.precoders(best_x) * scale
    powers = np.sum(np.abs(w) ** 2, axis=(0, 2))
    residual = float(np.max(np.abs(channel.per_subcarrier @ w - targets)))
    return OracleResult(powers=powers,
                        objective=float(pa.alpha * np.sum(np.sqrt(powers))),
                        method=method,
                        zf_residual=residual,
                        gradient_norm=gradient_norm)


def mc_inverse_wishart_trace(antennas: int, users: int,
                             beta: Sequence[float],
                             gamma: Sequence[float],
                             noise_power: float,
                             draws: int,
                             rng: np.random.Generator) -> float:
    """
    Monte-Carlo mean of tr((H H^H)^-1 D_gamma sigma^2) for Rayleigh H with
    large-scale fading `beta`. Its exact value is
    sum_k gamma_k sigma^2 / beta_k / (M - K).
    """
    if antennas <= users:
        raise PowerDomainError(f'need M > K, got M={antennas} K={users}')
    if draws < 100:
        raise ValueError(f'draws must be >= 100, got {draws}')
    beta = np.asarray(beta, dtype=float)
    weights = np.asarray(gamma, dtype=float) * noise_power
    shape = (draws, users, antennas)
    h = np.sqrt(beta)[np.newaxis, :, np.newaxis] \
        * (rng.standard_normal(shape)
           + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    inverse = np.linalg.inv(h @ np.conj(np.swapaxes(h, 1, 2)))
    diagonal = np.real(np.diagonal(inverse, axis1=1, axis2=2))
    return float(np.mean(diagonal @ weights))


def grid_min_bs(antennas: int, users: int, trace: float,
                pa: PaModel, bs: BsModel,
                p_max: Optional[float] = None) -> int:
    """
    Exhaustive search of the active antenna count minimizing the asymptotic
    BS consumption among counts whose per-antenna power respects p_max.
    Ties go to the smaller count.
    """
    p_max = pa.p_max if p_max is None else p_max
    if antennas > ORACLE_GRID_MAX_M:
        raise OracleSizeError(
            f'grid search is limited to M <= {ORACLE_GRID_MAX_M}')
    counts = np.arange(users + 1, antennas + 1)
    counts = counts[trace / (counts * (counts - users)) <= p_max]
    if counts.size == 0:
        raise InfeasibleScenarioError(
            f'no antenna count in [{users + 1}, {antennas}] respects '
            f'p_max={p_max:g}')
    consumption = np.array([
        pa.alpha * math.sqrt(m * trace / (m - users))
        + bs.p_fix + bs.circuit_per_antenna * m for m in counts])
    return int(counts[np.argmin(consumption)])


def _quadratic(a: complex, b: complex) -> List[complex]:
    """roots of x^2 + a x + b"""
    disc = cmath.sqrt(a * a - 4 * b)
    return [(-a + disc) / 2, (-a - disc) / 2]


def _cubic(a: float, b: float, c: float) -> List[complex]:
    """roots of x^3 + a x^2 + b x + c by Cardano"""
    shift = a / 3
    p = b - a * a / 3
    q = 2 * a ** 3 / 27 - a * b / 3 + c
    root = cmath.sqrt((q / 2) ** 2 + (p / 3) ** 3)
    u3 = -q / 2 + root
    if abs(u3) < abs(-q / 2 - root):
        u3 = -q / 2 - root
    u = u3 ** (1 / 3) if u3 != 0 else 0
    v = -p / (3 * u) if u != 0 else 0
    omega = complex(-0.5, math.sqrt(3) / 2)
    return [u + v - shift,
            omega * u + omega.conjugate() * v - shift,
            omega.conjugate() * u + omega * v - shift]


def closed_form_quartic_roots(coefficients: Sequence[float]) -> np.ndarray:
    """
    All four roots of a4 x^4 + a3 x^3 + a2 x^2 + a1 x + a0 by Ferrari's
    method through the resolvent cubic.

    :param coefficients: (a4, a3, a2, a1, a0), a4 != 0
    :return: complex roots
    """
    a4, a3, a2, a1, a0 = (float(c) for c in coefficients)
    if a4 == 0:
        raise ValueError('leading coefficient must be non-zero')
    a, b, c, d = a3 / a4, a2 / a4, a1 / a4, a0 / a4
    # depressed quartic y^4 + p y^2 + q y + r with x = y - a/4
    shift = a / 4
    p = b - 3 * a * a / 8
    q = c + a ** 3 / 8 - a * b / 2
    r = d - 3 * a ** 4 / 256 + a * a * b / 16 - a * c / 4
    if abs(q) < 1e-14 * max(1.0, abs(p), abs(r)):
        roots = []
        for z in _quadratic(p, r):
            y = cmath.sqrt(z)
            roots.extend([y - shift, -y - shift])
        return np.array(roots)

    resolvent = _cubic(-p / 2, -r, p * r / 2 - q * q / 8)
    m = max(resolvent, key=lambda s: abs(cmath.sqrt(2 * s - p)))
    s = cmath.sqrt(2 * m - p)
    t = -q / (2 * s)
    roots = _quadratic(-s, m - t) + _quadratic(s, m + t)
    return np.array([y - shift for y in roots])
