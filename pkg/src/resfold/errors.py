"""Exception types shared across the library."""


class ResfoldError(Exception):
    """Base class for all library errors."""


class RingMismatch(ResfoldError):
    pass


class NotDivisible(ResfoldError):
    pass


class NotASquare(ResfoldError):
    pass


class NotMember(ResfoldError):
    pass


class NoLift(ResfoldError):
    pass


class LiftFailed(ResfoldError):
    pass


class NotAlternating(ResfoldError):
    pass


class RankDeficient(ResfoldError):
    pass


class WrongComponent(ResfoldError):
    pass


class NotInCell(ResfoldError):
    pass


class NotASummand(ResfoldError):
    pass


class FormatMismatch(ResfoldError):
    pass


class SchemaError(ResfoldError):
    """Interchange-file violation, carrying the path to the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
