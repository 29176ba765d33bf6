"""Exception hierarchy shared by every module."""


class MidlayerError(Exception):
    """Base class; the CLI maps it to exit code 1."""


class InvalidLayer(MidlayerError, ValueError):
    pass


class BudgetExceeded(MidlayerError):
    """Raised when a node or vertex cap is hit.

    ``partial`` carries whatever was computed before the abort (a count,
    a list of emitted sets, ...) so callers can report it.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DirectionOutOfRange(MidlayerError, ValueError):
    pass


class NotSelfComplementary(MidlayerError, ValueError):
    pass


class NotUniform(MidlayerError, ValueError):
    pass


class UniformityZero(MidlayerError, ValueError):
    pass


class ShiftIndexOutOfRange(MidlayerError, ValueError):
    pass


class NoBracket(MidlayerError, ValueError):
    pass


class WrongLayer(MidlayerError, ValueError):
    pass


class NotIndependent(MidlayerError, ValueError):
    pass


class NotMaximal(MidlayerError, ValueError):
    pass


class NotTriangleFree(MidlayerError, ValueError):
    pass


class NotAnEdge(MidlayerError, ValueError):
    pass


class NotInducedMatching(MidlayerError, ValueError):
    pass


class HypothesisViolated(MidlayerError, ValueError):
    pass


class InvalidThresholds(MidlayerError, ValueError):
    pass


class InconsistentXi(MidlayerError, ValueError):
    pass


class InvalidPair(MidlayerError, ValueError):
    pass


class PreconditionFailed(MidlayerError, ValueError):
    pass


class SinkAborted(MidlayerError):
    """The consumer of an enumeration asked to stop."""


class InvalidDefects(MidlayerError, ValueError):
    pass


class ChoiceOnBlockedEdge(MidlayerError, ValueError):
    pass


class InvalidParameter(MidlayerError, ValueError):
    pass


class Uncoverable(MidlayerError, ValueError):
    pass


class PsiEqualsD(MidlayerError, ValueError):
    pass


class NotSubset(MidlayerError, ValueError):
    pass


class NotRegular(MidlayerError, ValueError):
    pass


class DirectionsNotDistinct(MidlayerError, ValueError):
    pass


class AlphaOutOfRange(MidlayerError, ValueError):
    pass
