"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
2 for configuration problems, 3 for violated numerical preconditions.
"""

from __future__ import annotations


class CoherenceCostError(Exception):
    exit_code = 3


class ConfigInvalid(CoherenceCostError):
    exit_code = 2


class FixtureUnreadable(CoherenceCostError):
    exit_code = 2


class IoError(CoherenceCostError):
    exit_code = 2


class DimensionMismatch(CoherenceCostError, ValueError):
    pass


class NotHermitian(CoherenceCostError, ValueError):
    pass


class TraceNotOne(CoherenceCostError, ValueError):
    pass


class NotPSD(CoherenceCostError, ValueError):
    pass


class RankDeficient(CoherenceCostError, ValueError):
    pass


class SupportViolation(CoherenceCostError, ValueError):
    pass


class CoherentTarget(CoherenceCostError, ValueError):
    pass


class ZeroCoherenceInput(CoherenceCostError, ValueError):
    pass


class MaxStepsExceeded(CoherenceCostError, RuntimeError):
    pass
