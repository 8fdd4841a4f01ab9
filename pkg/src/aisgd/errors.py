"""Exception hierarchy shared by every module."""


class SGDError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(SGDError, ValueError):
    pass


class ConfigError(SGDError, ValueError):
    pass


class UnsupportedOperationError(SGDError, TypeError):
    pass


class NumericOverflowError(SGDError, ArithmeticError):
    def __init__(self, eta):
        super().__init__(f"exp({eta!r}) exceeds the representable range")
        self.eta = eta


class SolverFailureError(SGDError, RuntimeError):
    """The fixed-point map did not change sign over the search bracket."""


class ConvergenceFailureError(SGDError, RuntimeError):
    def __init__(self, message, best_xi):
        super().__init__(message)
        self.best_xi = best_xi


class DivergenceError(SGDError, ArithmeticError):
    def __init__(self, update_index, norm):
        super().__init__(
            f"iterate diverged at update {update_index} (norm={norm!r})")
        self.update_index = update_index
        self.norm = norm


class DataError(SGDError, ValueError):
    pass


class ParseError(DataError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SchemaError(DataError):
    pass
