import json
import logging
import os
from datetime import datetime, timezone

EXTRA_FIELDS = ('instance', 'command', 'subvariety', 'prime', 'seed', 'trials', 'suite')

_level_override: str | None = None


class JSONFormatter(logging.Formatter):
    """Custom JSON formatter for structured logging."""

    def format(self, record):
        log_entry = {
            'timestamp': datetime.now(timezone.utc).isoformat().replace('+00:00', 'Z'),
            'level': record.levelname,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno,
        }

        for field in EXTRA_FIELDS:
            if hasattr(record, field):
                log_entry[field] = getattr(record, field)

        if record.exc_info:
            log_entry['exception'] = self.formatException(record.exc_info)

        return json.dumps(log_entry, default=str)


def resolve_level(level: str | None = None) -> int:
    """Map a level name (flag, then LOG_LEVEL, then WARNING) to a logging constant."""
    name = (level or _level_override or os.getenv('LOG_LEVEL') or 'WARNING').upper()
    return getattr(logging, name, logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    """Get a configured logger instance."""
    logger = logging.getLogger(name)

    # Avoid duplicate handlers
    if logger.handlers:
        return logger

    logger.setLevel(resolve_level())
    logger.propagate = False

    # StreamHandler defaults to stderr; stdout is reserved for reports
    handler = logging.StreamHandler()
    handler.setFormatter(JSONFormatter())
    logger.addHandler(handler)

    return logger


def set_level(level: str | None) -> None:
    """Re-level every edcert logger, including ones created later."""
    global _level_override
    _level_override = level
    resolved = resolve_level(level)
    for name, logger in logging.Logger.manager.loggerDict.items():
        if name.startswith('edcert') and isinstance(logger, logging.Logger):
            logger.setLevel(resolved)
