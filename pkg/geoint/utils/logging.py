"""
Geoint Logger
Structured logging for frame construction, zero tests and the classifier
"""

import json
import logging
import sys
from datetime import datetime
from logging.handlers import RotatingFileHandler, TimedRotatingFileHandler
from pathlib import Path
from typing import Any, Dict, Optional

STRUCTURED_FIELDS = (
    "label",
    "state",
    "samples",
    "witness",
    "step",
    "order",
    "seconds",
    "rows",
    "cols",
    "rank",
    "command",
    "exit_code",
    "details",
)

# Shown inline in the text log
TAGGED_FIELDS = ("label", "step", "order", "command")


class GeoLogger:
    """Centralized logging for geoint computations"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self.logger = logging.getLogger("geoint")
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False

        # Silent until setup() installs handlers
        self.logger.handlers = [logging.NullHandler()]

        self._initialized = True

    def setup(
        self,
        log_dir: Optional[Path] = None,
        console_level: str = "WARNING",
        file_level: str = "DEBUG",
        enable_rotation: bool = True,
    ):
        """
        Setup logging configuration

        Args:
            log_dir: Directory for log files; None disables file logging
            console_level: Console logging level (DEBUG, INFO, WARNING, ERROR)
            file_level: File logging level
            enable_rotation: Rotate the text log daily instead of by size
        """
        self.logger.handlers = []

        # Console goes to stderr; stdout is reserved for reports
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(getattr(logging, console_level.upper()))
        console_handler.setFormatter(ConsoleFormatter())
        self.logger.addHandler(console_handler)

        if log_dir is None:
            return

        log_dir.mkdir(parents=True, exist_ok=True)

        if enable_rotation:
            file_handler = TimedRotatingFileHandler(
                log_dir / "geoint.log", when="midnight", interval=1, backupCount=7
            )
        else:
            file_handler = RotatingFileHandler(
                log_dir / "geoint.log",
                maxBytes=10 * 1024 * 1024,  # 10MB
                backupCount=5,
            )

        file_handler.setLevel(getattr(logging, file_level.upper()))
        file_handler.setFormatter(FileFormatter())
        self.logger.addHandler(file_handler)

        json_handler = RotatingFileHandler(
            log_dir / "geoint_structured.json",
            maxBytes=10 * 1024 * 1024,
            backupCount=3,
        )
        json_handler.setLevel(logging.INFO)
        json_handler.setFormatter(JSONFormatter())
        self.logger.addHandler(json_handler)

    def _emit(self, level: int, message: str, fields: Dict[str, Any]) -> None:
        traceback = level >= logging.ERROR and sys.exc_info()[0] is not None
        self.logger.log(level, message, exc_info=traceback, extra=fields)

    def debug(self, message: str, **kwargs):
        self._emit(logging.DEBUG, message, kwargs)

    def info(self, message: str, **kwargs):
        self._emit(logging.INFO, message, kwargs)

    def warning(self, message: str, **kwargs):
        self._emit(logging.WARNING, message, kwargs)

    def error(self, message: str, **kwargs):
        """Attaches the active traceback, if any"""
        self._emit(logging.ERROR, message, kwargs)

    def critical(self, message: str, **kwargs):
        self._emit(logging.CRITICAL, message, kwargs)

    # computation events

    def log_zero_test(
        self, label: str, state: str, samples: int, witness: Optional[Dict[str, str]] = None
    ):
        """Log the outcome of a sampled zero test"""
        self.debug(
            f"Zero test: {label} -> {state}",
            label=label,
            state=state,
            samples=samples,
            witness=witness or {},
        )

    def log_branch(self, step: str, state: str):
        """Log one classifier decision"""
        self.info(f"Branch: {step} -> {state}", step=step, state=state)

    def log_frame(self, order: int, seconds: float):
        """Log invariant frame construction"""
        self.info(
            f"Invariant frame to order {order} in {seconds:.2f}s",
            order=order,
            seconds=round(seconds, 3),
        )

    def log_elimination(self, rows: int, cols: int, rank: int):
        """Log exact elimination statistics"""
        self.info(
            f"Elimination: {rows}x{cols}, rank {rank}", rows=rows, cols=cols, rank=rank
        )

    def log_command(self, command: str, exit_code: int, details: Optional[Dict[str, Any]] = None):
        """Log CLI command completion"""
        self.info(
            f"Command: {command} -> exit {exit_code}",
            command=command,
            exit_code=exit_code,
            details=details or {},
        )


class ConsoleFormatter(logging.Formatter):
    """Colorful console formatter"""

    COLORS = {
        "DEBUG": "\033[2m",
        "INFO": "\033[34m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[1;31m",
        "RESET": "\033[0m",
    }

    def format(self, record):
        color = self.COLORS.get(record.levelname, self.COLORS["RESET"])
        reset = self.COLORS["RESET"]
        timestamp = datetime.now().strftime("%H:%M:%S")

        return f"{color}[{timestamp}] {record.levelname:8s}{reset}: {record.getMessage()}"


class FileFormatter(logging.Formatter):
    """Detailed file formatter"""

    def format(self, record):
        """Format log record for file"""
        timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")

        extra = "".join(
            f" [{name}={getattr(record, name)}]" for name in TAGGED_FIELDS if hasattr(record, name)
        )

        return f"{timestamp} {record.levelname:8s} {record.name}: {record.getMessage()}{extra}"


class JSONFormatter(logging.Formatter):
    """JSON formatter for structured logging"""

    def format(self, record):
        """Format log record as JSON"""
        log_data = {
            "timestamp": datetime.now().isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        for name in STRUCTURED_FIELDS:
            if hasattr(record, name):
                log_data[name] = getattr(record, name)

        return json.dumps(log_data, default=str)


_logger: Optional[GeoLogger] = None


def get_logger() -> GeoLogger:
    """Get global logger instance"""
    global _logger
    if _logger is None:
        _logger = GeoLogger()
    return _logger
