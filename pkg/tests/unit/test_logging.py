import logging
import sys

import pytest
from src.utils.logging import (
    OperationTimer,
    RunContextFilter,
    StructuredFormatter,
    StructuredLogger,
    command_var,
    run_id_var,
    setup_structured_logging,
)


def test_operation_timer_success(caplog):
    """Test a finished operation logs its duration and fields."""
    logger = StructuredLogger("tests.timer")

    with caplog.at_level(logging.INFO, logger="tests.timer"):
        with OperationTimer("evolve", logger, dim=84):
            pass

    record = caplog.records[-1]
    assert record.getMessage() == "evolve completed successfully"
    assert record.status == "success"
    assert record.dim == 84
    assert record.duration_ms >= 0.0


def test_operation_timer_failure(caplog):
    """Test a raising operation is logged as a failure and re-raised."""
    logger = StructuredLogger("tests.timer")

    with caplog.at_level(logging.INFO, logger="tests.timer"):
        with pytest.raises(ValueError):
            with OperationTimer("sweep_omega", logger):
                raise ValueError("omega grid is empty")

    record = caplog.records[-1]
    assert record.levelno == logging.ERROR
    assert record.error_type == "ValueError"
    assert record.error == "omega grid is empty"


def test_run_context_filter():
    """Test run_id and command are stamped from the context variables."""
    record = logging.LogRecord("tests", logging.INFO, __file__, 1, "msg", None, None)
    run_token, command_token = run_id_var.set("abc123"), command_var.set("compare")
    try:
        assert RunContextFilter().filter(record)
    finally:
        run_id_var.reset(run_token)
        command_var.reset(command_token)

    assert record.run_id == "abc123"
    assert record.command == "compare"


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield root
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.mark.parametrize("json_format", [True, False])
def test_setup_structured_logging(restore_root_logger, json_format):
    """Test the root logger gets one stderr handler, JSON ones stamped with the run context."""
    setup_structured_logging(level="debug", json_format=json_format)

    (handler,) = restore_root_logger.handlers
    assert restore_root_logger.level == logging.DEBUG
    assert handler.stream is sys.stderr
    assert isinstance(handler.formatter, StructuredFormatter) == json_format
    assert any(isinstance(f, RunContextFilter) for f in handler.filters) == json_format
