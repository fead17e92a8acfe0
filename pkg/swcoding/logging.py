import logging
import sys
import time
from contextlib import contextmanager

from fastapi import Request
from starlette.types import ASGIApp, Scope, Receive, Send

from swcoding.config.config import LOGGING_CONFIG

logger = logging.getLogger(__name__)


def configure_logging(verbosity=0, stream=None):
    """
    Attach a single stderr handler to the package logger.

    verbosity 0 logs at LOGGING_CONFIG["default_level"], 1 adds info, 2 or more
    adds debug output.
    Calling it again replaces the handler instead of stacking a second one.
    """
    package_logger = logging.getLogger("swcoding")
    for handler in list(package_logger.handlers):
        package_logger.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(LOGGING_CONFIG["format"]))
    package_logger.addHandler(handler)
    levels = {0: LOGGING_CONFIG["default_level"], 1: "INFO"}
    package_logger.setLevel(levels.get(verbosity, "DEBUG"))
    package_logger.propagate = False
    return package_logger


@contextmanager
def log_latency(label, log=None):
    log = log or logger
    start_time = time.perf_counter()
    log.info(f"{label} started")
    try:
        yield
    finally:
        process_time = time.perf_counter() - start_time
        log.info(f"{label} completed in {process_time} seconds")


class LogLatencyMiddleware:
    def __init__(self, app: ASGIApp) -> None:
        self.app = app

    async def __call__(self, scope: Scope, receive: Receive, send: Send) -> None:
        if scope['type'] == 'http':
            request = Request(scope, receive=receive)
            with log_latency(f"Request: {request.method} {request.url.path}"):
                await self.app(scope, receive, send)
        else:
            await self.app(scope, receive, send)  # Non-HTTP requests are passed through
