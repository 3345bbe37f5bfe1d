from secondchange.core.exception import UsageError


class BootstrapConfigError(UsageError):
    args = ("Invalid bootstrap configuration",)


class LagError(UsageError):
    args = ("Invalid lag",)
