"""Exception hierarchy shared by every module."""


class FFMindenError(Exception):
    """Base class for all library errors."""


class ValidationError(FFMindenError, ValueError):
    pass


class NonPrimeCharacteristic(ValidationError):
    pass


class ReducibleModulus(ValidationError):
    pass


class NoDefaultModulus(ValidationError):
    pass


class FieldMismatch(ValidationError):
    pass


class DivisionByZero(FFMindenError, ZeroDivisionError):
    pass


class AllZero(ValidationError):
    pass


class ZeroInput(ValidationError):
    pass


class DegreeTooSmall(ValidationError):
    pass


class DegreeTooLarge(ValidationError):
    pass


class DegreeOverflow(ValidationError):
    pass


class ZeroDenominator(DivisionByZero):
    pass


class PrecisionTooLow(ValidationError):
    pass


class PrecisionMismatch(ValidationError):
    pass


class BudgetExceeded(FFMindenError):
    def __init__(self, required: int, budget: int, what: str = "enumeration"):
        super().__init__(f"{what} needs {required} units, budget is {budget} (raise with --budget)")
        self.required = required
        self.budget = budget


class CapExceeded(FFMindenError):
    pass


class ParseError(ValidationError):
    """Malformed polynomial, element, tail or set text."""


class NonMonicBase(ValidationError):
    pass


class ConstantBase(ValidationError):
    pass


class EmptySet(ValidationError):
    pass


class WrongStatistic(ValidationError):
    pass
