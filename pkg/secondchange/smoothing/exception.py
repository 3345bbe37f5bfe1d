from secondchange.core.exception import DataError, UsageError


class BandwidthError(UsageError):
    args = ("Bandwidth outside the admissible range",)


class SingularFitError(DataError):
    args = ("Singular local linear normal equations",)


class DegenerateSegmentError(DataError):
    args = ("Segment too short for a local linear fit",)


class LocatorWindowError(UsageError):
    args = ("Locator window exceeds the trimmed range",)
