"""
.. module:: exceptions
   :synopsis: Structured errors raised by the precoding library.

Every error subclasses the builtin `ValueError` or `RuntimeError`, so callers
that only care about "bad input" versus "numerical failure" can keep
catching the builtins. The management commands map these classes onto
process exit codes.
"""
from typing import Optional


class DimensionError(ValueError):
    """Shapes of matrices or vectors do not agree."""


class PowerDomainError(ValueError):
    """An argument lies outside the domain of a power or geometry formula,
    e.g. a negative power, an efficiency outside (0, 1] or M_a <= K."""


class SingularChannelError(RuntimeError):
    """The K x K Gram matrix of a solve is not (numerically) positive
    definite."""

    def __init__(self, message: str, condition: Optional[float] = None):
        super().__init__(message)
        self.condition = condition


class InfeasibleScenarioError(RuntimeError):
    """The QoS targets cannot be met.

    :ivar deficit: amplitude missing to reach the target (saturating
        precoder), if applicable
    :ivar min_antennas: smallest antenna count satisfying the per-antenna
        power constraint, if applicable
    """

    def __init__(self, message: str,
                 deficit: Optional[float] = None,
                 min_antennas: Optional[int] = None):
        super().__init__(message)
        self.deficit = deficit
        self.min_antennas = min_antennas


class OracleSizeError(ValueError):
    """The instance is too large for the brute-force oracle."""


class ScenarioConfigError(ValueError):
    """A configuration file or value could not be parsed.

    :ivar line: 1-based line number in the config file, when known
    """

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)
        self.line = line
