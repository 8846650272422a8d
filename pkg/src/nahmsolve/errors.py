"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
1 for invalid input, 2 for numerical failure, 3 for I/O problems.
"""


class NahmError(Exception):
    exit_code = 2


class ValidationError(NahmError):
    exit_code = 1


class NumericalError(NahmError):
    exit_code = 2


class DuplicatePoints(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class VerticalPair(ValidationError):
    pass


class DegenerateConfig(ValidationError):
    pass


class GenericityFailure(NumericalError):
    pass


class DuplicateNodes(ValidationError):
    pass


class ZeroZeta(ValidationError):
    pass


class ScaleOverflow(NumericalError):
    pass


class SingularBlock(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass


class ZetaAtSingularity(ValidationError):
    pass


class InconsistentSpread(NumericalError):
    pass


class NonPositiveNorm(NumericalError):
    pass


class ZetaTooCloseToDoublePoint(ValidationError):
    pass


class NonGenericTwist(ValidationError):
    pass


class AtSource(ValidationError):
    pass


class PoleHit(ValidationError):
    pass


class StringCrossing(ValidationError):
    pass
