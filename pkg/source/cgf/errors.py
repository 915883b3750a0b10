"""
    Exceptions raised by the cut generating function toolkit
"""


class CgfError(Exception):
    """ Base class, run.py turns any of these into a named error and exit code 1 """


class NonIntegerData(CgfError, ValueError):
    pass


class UnboundedFeasibleSet(CgfError, ValueError):
    pass


class SingularBasis(CgfError, ArithmeticError):
    """ An optimal basis that cannot be inverted means the solver is broken """


class PivotLimitExceeded(CgfError, RuntimeError):
    pass


class InsufficientFractionalRows(CgfError):
    """ Fewer than k tableau rows have a fractional right-hand side ("n/a" in the result tables) """


class InvalidParameters(CgfError, ValueError):
    pass


class ValidityViolation(CgfError):
    def __init__(self, message, witness=None):
        super(ValidityViolation, self).__init__(message)
        self.witness = witness


class DegenerateDirection(CgfError, ZeroDivisionError):
    pass


class NegativeCoefficient(CgfError, ValueError):
    pass


class InfeasibleCutError(CgfError, ValueError):
    pass


class BasicVariableCoefficient(CgfError, ValueError):
    pass


class EnumerationTooLarge(CgfError):
    pass


class NotApplicableStrategy(CgfError):
    pass


class InstanceFormatError(CgfError, ValueError):
    pass


class SpecFormatError(CgfError, ValueError):
    pass
