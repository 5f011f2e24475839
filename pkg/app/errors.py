class SpecAbduceError(Exception):
    """Base class for every error the engine raises on purpose."""


class ConfigurationError(SpecAbduceError):
    pass


class ParseError(ConfigurationError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class ContractViolation(SpecAbduceError):
    """A caller broke an operation's precondition."""


class DomainError(SpecAbduceError):
    """A partial library operation was applied outside its domain (e.g. top of an empty stack)."""


class PathInfeasible(DomainError):
    """Concrete inputs drive execution off the control-flow path being replayed."""


class SolverError(SpecAbduceError):
    pass


class ModelDecodingError(SolverError):
    pass


class SolverUnknown(SpecAbduceError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"solver returned unknown: {reason}")
