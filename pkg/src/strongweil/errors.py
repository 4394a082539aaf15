"""Exception hierarchy.

``UsageError`` subclasses describe malformed input (bad field size, syntax);
``DomainError`` subclasses describe mathematical findings about a valid input
(a singular curve, a curve that is not split at infinity, ...).  The CLI maps
the first family to exit code 1 and the second to exit code 2.
"""


class StrongWeilError(Exception):
    pass


class UsageError(StrongWeilError):
    pass


class DomainError(StrongWeilError):
    pass


class NotPrime(UsageError):
    pass


class FieldTooLarge(UsageError):
    pass


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class PoleAtPlace(DomainError):
    pass


class ExprSyntaxError(UsageError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundName(UsageError):
    pass


class NotAWeierstrassEquation(UsageError):
    pass


class WrongDegree(UsageError):
    pass


class SingularCurve(DomainError):
    pass


class WrongCharacteristic(DomainError):
    pass


class DenominatorVanishes(DomainError):
    pass


class ConstantJInvariant(DomainError):
    pass


class NotIntegral(DomainError):
    pass


class NotSplitAtInfinity(DomainError):
    pass


class ProfileInconsistent(DomainError):
    pass


class ContextMismatch(DomainError):
    pass


class ZeroCycle(DomainError):
    pass


class NonIntegralDegree(DomainError):
    pass


class OffsetNotPowerOfP(DomainError):
    pass


class ConstraintViolated(DomainError):
    pass
