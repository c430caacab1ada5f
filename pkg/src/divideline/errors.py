"""Exception hierarchy.

Anything deriving from :class:`InputError` is a validation problem (bad file,
bad value, bad config) and maps to CLI exit status 2.  Everything else under
:class:`DividelineError` is a runtime failure of a pipeline and maps to 3.
"""


class DividelineError(Exception):
    """Base class for all package errors."""


class InputError(DividelineError):
    """Invalid input data or configuration."""


class MissingFile(InputError):
    def __init__(self, path):
        super().__init__(f"file not found: {path}")
        self.path = str(path)


class MalformedRow(InputError):
    def __init__(self, path, line, reason):
        super().__init__(f"{path}:{line}: {reason}")
        self.path = str(path)
        self.line = line


class UnknownBrand(InputError):
    pass


class CoordinateOutOfRange(InputError):
    pass


class FewerThanTwoPerClass(InputError):
    pass


class NonPositiveIncome(InputError):
    pass


class DuplicateRegion(InputError):
    pass


class NotAPolygon(InputError):
    pass


class DegenerateRing(InputError):
    pass


class DegenerateBbox(InputError):
    pass


class SelfIntersectingRing(InputError):
    pass


class InvalidGeometry(InputError):
    pass


class ConfigInvalid(InputError):
    pass


class ClassTooSmall(DividelineError):
    pass


class EmptyClass(DividelineError):
    pass


class ZeroVariance(DividelineError):
    pass


class DegenerateHyperplane(DividelineError):
    """The solver produced a zero normal vector (no preferred direction)."""


class EmptyEnsemble(DividelineError):
    pass


class CancellationDegenerate(DividelineError):
    pass


class NoIntersection(DividelineError):
    pass


class DivergenceDetected(DividelineError):
    pass


class AllEqual(DividelineError):
    pass


class TestSetEmpty(DividelineError):
    __test__ = False  # not a pytest class


class ThresholdOutOfRange(DividelineError):
    pass


class NoCrossing(DividelineError):
    pass


class EmptyScene(DividelineError):
    pass


class NonConvergenceWarning(RuntimeWarning):
    """SMO hit its iteration cap; the returned plane is the last iterate."""
