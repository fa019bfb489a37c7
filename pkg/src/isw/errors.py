"""Exception types shared across the package."""


class IswError(Exception):
    pass


class WellFormednessError(IswError):
    pass


class UnknownToken(WellFormednessError):
    pass


class DanglingEntail(WellFormednessError):
    pass


class NotConsistent(IswError):
    pass


class PreconditionViolated(IswError):
    pass


class BudgetExceeded(IswError):
    pass


class NotBounded(IswError):
    pass


class NotLDomain(IswError):
    pass


class NotBelow(IswError):
    pass


class SystemMismatch(IswError):
    pass


class WitnessInvalid(IswError):
    pass


class LookupNotUnique(IswError):
    pass


class ParseError(IswError):
    def __init__(self, msg, line=0, col=0):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col
