from secondchange.core.exception import DataError, UsageError


class DegenerateCriterionError(DataError):
    args = ("The GCV denominator vanishes for every candidate bandwidth",)


class GridError(UsageError):
    args = ("Invalid bandwidth grid",)
