"""Exception hierarchy.

Every error carries a stable class name that the command line reports on
stderr, and an exit code so scripts can branch on the failure kind.
"""


class CycleProbeError(Exception):
    exit_code = 1


# time series / ingestion
class EmptyIntersection(CycleProbeError):
    exit_code = 10


class MisalignedSeries(CycleProbeError):
    exit_code = 11


class NonPositiveInput(CycleProbeError):
    exit_code = 12


class LagTooLarge(CycleProbeError):
    exit_code = 13


class ParseError(CycleProbeError):
    exit_code = 14


class GapInSeries(CycleProbeError):
    exit_code = 15


class DuplicateQuarter(CycleProbeError):
    exit_code = 16


class NonPositiveValue(CycleProbeError):
    exit_code = 17


class ConfigError(CycleProbeError):
    exit_code = 18


# filtering
class SeriesTooShort(CycleProbeError):
    exit_code = 20


class NonPositiveLambda(CycleProbeError):
    exit_code = 21


class FactorizationError(CycleProbeError):
    exit_code = 22


# estimation
class DegenerateDummy(CycleProbeError):
    exit_code = 30


class PerfectSeparation(CycleProbeError):
    exit_code = 31


class SingularInformation(CycleProbeError):
    exit_code = 32


class NotConverged(CycleProbeError):
    exit_code = 33


class DimensionMismatch(CycleProbeError):
    exit_code = 34


class SingularSubcovariance(CycleProbeError):
    exit_code = 35


class InvalidDesign(CycleProbeError):
    exit_code = 36


# evaluation / selection
class LengthMismatch(CycleProbeError):
    exit_code = 40


class EmptyInput(CycleProbeError):
    exit_code = 41


class AllActualsZero(CycleProbeError):
    exit_code = 42


class NoSignificantModel(CycleProbeError):
    exit_code = 43
