"""Exception hierarchy.

Every error carries the CLI exit code it maps to: 2 for configuration
problems, 3 for numerical failures, 4 for violated preconditions.
"""


class OmitlabError(Exception):
    exit_code = 1


class ConfigError(OmitlabError):
    exit_code = 2


class ParseError(ConfigError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class ValidationError(ConfigError, ValueError):
    pass


class NumericalError(OmitlabError, ArithmeticError):
    exit_code = 3


class SingularSystem(NumericalError):
    pass


class NoConvergence(NumericalError):
    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class DipNotResolved(NumericalError):
    pass


class PreconditionError(OmitlabError, ValueError):
    exit_code = 4


class OutOfValidityRange(PreconditionError):
    pass


class DomainError(PreconditionError):
    pass


class GridTooCoarse(PreconditionError):
    pass


class DegenerateInput(PreconditionError):
    pass


class AliasError(PreconditionError):
    pass


class WindowTooShort(PreconditionError):
    pass
