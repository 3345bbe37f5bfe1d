from secondchange.core.exception import DataError, UsageError


class EndpointChangePointError(DataError):
    args = ("Change point estimate at the sample boundary",)


class DeltaThresholdError(UsageError):
    args = ("The relevance threshold delta must be positive",)
