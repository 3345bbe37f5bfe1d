import logging
import sys

from loguru import logger

from secondchange.core.settings import LogSettings

PLAIN_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def setup_logging(settings: LogSettings = None) -> logging.Logger:
    """Configure diagnostics on stderr; stdout is reserved for reports.

    With ``guru`` on, loguru gets a single stderr sink (JSON lines when
    ``serialize`` is set). Otherwise the standard logging module is used.
    https://github.com/Delgan/loguru
    """
    settings = settings or LogSettings()
    if settings.guru:
        logger.configure(
            handlers=[
                {
                    "sink": sys.stderr,
                    "level": settings.level,
                    "backtrace": settings.traceback,
                    "serialize": settings.serialize,
                },
            ],
        )
        logger.debug("Logging through loguru")
        return logger
    logging.basicConfig(level=settings.level, stream=sys.stderr, format=PLAIN_FORMAT, force=True)
    log = logging.getLogger("secondchange")
    log.debug("Logging through the standard logging module")
    return log
