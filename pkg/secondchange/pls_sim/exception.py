from secondchange.core.exception import DataError, UsageError


class ModelSpecError(UsageError):
    args = ("Invalid model specification",)


class SimulationError(DataError):
    args = ("Simulation failed",)
