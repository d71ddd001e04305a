"""Structured JSON logging on stderr, stamped with the run context."""

import logging
import sys
import time
from contextvars import ContextVar
from datetime import datetime
from typing import Any, Dict, Optional

from pythonjsonlogger import jsonlogger

run_id_var: ContextVar[Optional[str]] = ContextVar("run_id", default=None)
command_var: ContextVar[Optional[str]] = ContextVar("command", default=None)


class StructuredFormatter(jsonlogger.JsonFormatter):
    """JSON formatter adding timestamp, level, logger, source location and any ``extra`` fields."""

    def add_fields(self, log_record: Dict[str, Any], record: logging.LogRecord, message_dict: Dict[str, Any]) -> None:
        super().add_fields(log_record, record, message_dict)

        log_record["timestamp"] = datetime.fromtimestamp(record.created).isoformat()
        log_record["level"] = record.levelname
        log_record["logger"] = record.name
        log_record["message"] = record.getMessage()
        log_record["file"] = f"{record.filename}:{record.lineno}"
        if record.funcName:
            log_record["function"] = record.funcName
        if record.exc_info:
            log_record["exception"] = self.formatException(record.exc_info)


class RunContextFilter(logging.Filter):
    """Stamp records with the config digest prefix and the CLI subcommand."""

    def filter(self, record: logging.LogRecord) -> bool:
        run_id = run_id_var.get()
        if run_id:
            record.run_id = run_id

        command = command_var.get()
        if command:
            record.command = command
        return True


def setup_structured_logging(level: str = "INFO", json_format: bool = True) -> None:
    """Route the root logger to stderr, as JSON with run context or as plain text.

    Example:
        >>> setup_structured_logging(level="INFO", json_format=True)
        >>> logging.getLogger(__name__).info("Sweep finished", extra={"n_points": 200})
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, level.upper()))
    root_logger.handlers.clear()

    # stdout carries the CLI summary line
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(getattr(logging, level.upper()))

    if json_format:
        handler.setFormatter(
            StructuredFormatter(
                fmt="%(timestamp)s %(level)s %(logger)s %(message)s",
                rename_fields={"levelname": "level", "name": "logger", "pathname": "file"},
            )
        )
        handler.addFilter(RunContextFilter())
    else:
        plain = logging.Formatter(fmt="%(asctime)s - %(name)s - %(levelname)s - %(message)s", datefmt="%Y-%m-%d %H:%M:%S")
        handler.setFormatter(plain)

    root_logger.addHandler(handler)


class StructuredLogger:
    """Logger whose keyword arguments become structured fields.

    Usage:
        logger = StructuredLogger(__name__)
        with OperationTimer("build_full_hamiltonian", logger, n_sites=3):
            H = build_full_hamiltonian(spec)
    """

    def __init__(self, name: str):
        self.logger = logging.getLogger(name)

    def log_operation(self, operation: str, succeeded: bool, duration_ms: float, **fields) -> None:
        status = "success" if succeeded else "failure"
        extra = {"operation": operation, "status": status, "duration_ms": round(duration_ms, 2), **fields}
        if succeeded:
            self.logger.info(f"{operation} completed successfully", extra=extra)
        else:
            self.logger.error(f"{operation} failed", extra=extra)


class OperationTimer:
    """Time a block and log its outcome through a StructuredLogger; exceptions propagate."""

    def __init__(self, operation: str, logger: StructuredLogger, **extra_fields):
        self.operation = operation
        self.logger = logger
        self.extra_fields = extra_fields
        self.start_time = 0.0

    def __enter__(self) -> "OperationTimer":
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> bool:
        duration_ms = (time.perf_counter() - self.start_time) * 1000
        if exc_type is None:
            self.logger.log_operation(self.operation, True, duration_ms, **self.extra_fields)
        else:
            self.logger.log_operation(
                self.operation, False, duration_ms, error=str(exc_val), error_type=exc_type.__name__, **self.extra_fields
            )
        return False
