"""Exception hierarchy. The CLI maps each family to an exit code."""


class EncompassError(Exception):
    exit_code = 1


class ConfigError(EncompassError):
    exit_code = 1


class DataError(EncompassError, ValueError):
    exit_code = 2


class NumericalError(EncompassError, ArithmeticError):
    exit_code = 3


class CollinearityError(NumericalError):
    """Regressors are linearly dependent at the singular-value tolerance."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class IdentificationError(CollinearityError):
    """Two forecasts carry the same information, so their weights are not
    separately identified."""


class DegenerateTargetError(NumericalError):
    pass
