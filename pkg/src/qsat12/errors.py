"""Exception hierarchy shared by all modules."""


class QSATError(Exception):
    """Base class for every error raised by this package."""


class InputError(QSATError, ValueError):
    """Malformed or out-of-domain input (CLI exit code 2)."""


class BudgetExceeded(QSATError, RuntimeError):
    """A configured search or enumeration budget was hit (CLI exit code 3)."""


# formula-core
class OutOfRangeVar(InputError):
    pass


class DuplicateExistentialAtomInClause(InputError):
    pass


class WrongBlockShape(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ShapeError(ParseError):
    pass


# generator
class LTooLarge(InputError):
    pass


class ProbabilityOutOfRange(InputError):
    pass


class RankOutOfRange(InputError):
    pass


# evaluator
class AssignmentLengthMismatch(InputError):
    pass


class UniversalBlockTooLarge(BudgetExceeded):
    pass


class InstanceTooLarge(BudgetExceeded):
    pass


# certificates
class InvalidCertificate(InputError):
    pass


class InvalidWitness(InputError):
    pass


class SearchBudgetExceeded(BudgetExceeded):
    pass


# counting
class BadLength(InputError):
    pass


class KOutOfRange(InputError):
    pass


class IndexTooLarge(BudgetExceeded):
    pass


# threshold math
class DomainError(InputError):
    pass


class NonPositiveAlpha(DomainError):
    pass


class InternalMismatch(QSATError, ArithmeticError):
    pass


# reduction
class TooFewClauses(InputError):
    pass


class EmptyInput(InputError):
    pass
