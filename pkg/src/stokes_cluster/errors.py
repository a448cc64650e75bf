"""Exception hierarchy.

Every error carries its class name verbatim so the CLI can surface it.
"""


class StokesClusterError(Exception):
    """Base class for all package errors."""


class InputError(StokesClusterError, ValueError):
    """Bad user input (shape, range, precondition)."""


class NumericalError(StokesClusterError, ArithmeticError):
    """A numerical routine could not deliver a trustworthy answer."""


# polynomial_core
class DimensionMismatch(InputError):
    pass


class DiscriminantViolation(InputError):
    pass


class PreconditionViolation(InputError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class BranchTrackingFailure(NumericalError):
    pass


# foliation
class StartTooCloseToZero(InputError):
    pass


class AmbiguousStructure(NumericalError):
    pass


class NotSaddleFree(StokesClusterError):
    pass


class StructureInconsistent(NumericalError):
    pass


# stokes_solver
class ConvergenceCheckFailure(NumericalError):
    pass


class GenericityViolation(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


# cluster_combinatorics
class SizeLimit(InputError):
    pass


class ArcNotInTriangulation(InputError):
    pass


class NonGeneric(StokesClusterError):
    def __init__(self, message, arc=None):
        super().__init__(message)
        self.arc = arc


class TransitionPole(StokesClusterError):
    pass


# main_map
class StepTooLarge(NumericalError):
    pass
