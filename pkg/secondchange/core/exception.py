class ExceptionBase(Exception):
    """
    Base class for exceptions.

    Args:
        args (str): The error message.
        exception (Exception): The original exception that caused this exception to be raised.

    Attributes:
        args (str): The error message.
        exception (Exception): The original exception that caused this exception to be raised.
    """

    def __init__(self, *args, exception: Exception = None):
        if args:
            self.args = args
        if exception:
            self.exception = exception

    def __str__(self):
        return f"{self.args[0]}"


class SecondChangeError(ExceptionBase):
    args = ("Unknown error",)


class UsageError(SecondChangeError):
    """Invalid configuration or tuning. The CLI exits with code 2."""

    args = ("Invalid usage",)


class DataError(SecondChangeError):
    """The observed data cannot be processed. The CLI exits with code 3."""

    args = ("Invalid data",)


class DimensionMismatchError(DataError):
    args = ("Array dimensions do not match",)
