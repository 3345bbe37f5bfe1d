from secondchange.core.exception import DataError


class IngestError(DataError):
    """Unreadable input file; ``line`` is the 1-based CSV line when known."""

    args = ("Cannot read the input series",)

    def __init__(self, *args, line: int = None, exception: Exception = None):
        super().__init__(*args, exception=exception)
        self.line = line
