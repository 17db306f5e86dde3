"""
Logger - loguru sinks for the console, an optional process log file and
the per-run log kept next to the run's artifacts
"""

import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, Union

from loguru import logger

from retrofit_prae.utils.config import get_settings

RUN_LOG_FILE = "run.log"

_CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{line}</cyan> | "
    "<level>{message}</level>"
)
_FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} | {message}"


def setup_logger(log_level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """
    Replace loguru's default handler with the configured sinks

    Args:
        log_level: Console and file level; defaults to RPRAE_LOG_LEVEL
        log_file: Process-wide log file; defaults to RPRAE_LOG_FILE (none when unset)
    """
    settings = get_settings()
    level = (log_level or settings.log_level).upper()
    log_file = log_file or settings.log_file

    logger.remove()
    logger.add(sys.stderr, format=_CONSOLE_FORMAT, level=level, colorize=True)

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_file,
            format=_FILE_FORMAT,
            level=level,
            rotation=settings.log_rotation,
            retention=settings.log_retention,
            backtrace=True,
            diagnose=False,
        )

    logger.debug(f"Logger initialized with level: {level}")


@contextmanager
def run_log(out_dir: Union[str, Path], level: str = "DEBUG") -> Iterator[Path]:
    """
    Append everything logged inside the block to <out_dir>/run.log

    Successive commands on one run directory (gen-data, train, resume,
    eval) share the file, so it reads as the run's history.
    """
    path = Path(out_dir) / RUN_LOG_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    sink_id = logger.add(path, format=_FILE_FORMAT, level=level, mode="a", encoding="utf-8")
    try:
        yield path
    finally:
        logger.remove(sink_id)
