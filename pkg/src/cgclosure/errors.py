"""Exception hierarchy. The CLI prints the class name of any DomainError."""


class DomainError(Exception):
    pass


class InputError(DomainError, ValueError):
    pass


class FieldMismatch(InputError):
    pass


class AmbiguousFloor(DomainError):
    pass


class Unbounded(DomainError):
    pass


class DegenerateFace(DomainError):
    pass


class IrrationalSubspace(DomainError):
    pass


class OnBoundary(DomainError):
    pass


class UndecidableMembership(DomainError):
    pass


class BudgetExhausted(DomainError):
    pass


class NotAFace(DomainError):
    pass


class CutInvalidOnFace(DomainError):
    pass


class NoCutNeeded(DomainError):
    pass


class DimensionTooLarge(DomainError):
    pass


class NotPlottable(DomainError):
    pass
