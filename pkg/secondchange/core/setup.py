from typing import Optional, Sequence

from pydantic import ValidationError

from secondchange.app import MainApp
from secondchange.cli import parse_config
from secondchange.core.exception import DataError, UsageError
from secondchange.core.logger import setup_logging
from secondchange.core.settings import RuntimeSettings

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


def run_app(argv: Optional[Sequence[str]] = None) -> int:
    """Parse, run and map failures to exit codes: 2 for usage errors, 3 for data errors."""
    logger = setup_logging()
    try:
        cfg = parse_config(argv)
        MainApp(RuntimeSettings(), logger).run(cfg)
    except SystemExit as ex:
        return EXIT_OK if ex.code in (0, None) else EXIT_USAGE
    except (UsageError, ValidationError) as ex:
        logger.error(f"Usage error: {ex}")
        return EXIT_USAGE
    except DataError as ex:
        logger.error(f"Data error: {ex}")
        return EXIT_DATA
    return EXIT_OK
