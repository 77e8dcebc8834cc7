import logging
import sys
from pathlib import Path
from typing import Optional, TextIO

import structlog


def setup_logging(
    log_level: str = "INFO",
    log_file: Optional[Path] = None,
    json_logs: bool = False,
    stream: Optional[TextIO] = None,
):
    """
    Configure structured logging for distrank

    stdout carries reports and CSV, so log lines go to stderr (or stream) and
    optionally to a file. json_logs switches the console renderer to one JSON
    object per line.
    """
    level = logging.getLevelName(log_level.upper())
    renderer = structlog.processors.JSONRenderer() if json_logs else structlog.dev.ConsoleRenderer()

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.format_exc_info if json_logs else structlog.dev.set_exc_info,
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=stream or sys.stderr),
        cache_logger_on_first_use=False,
    )

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        logging.root.addHandler(file_handler)

    return structlog.get_logger()
