#!/usr/bin/env python3
"""
Tests for structured JSON logging.
"""

import json
import logging

from edcert.utils import logger as logger_module
from edcert.utils.logger import JSONFormatter, get_logger, resolve_level, set_level


def test_json_formatter_includes_extras():
    record = logging.LogRecord("edcert.test", logging.INFO, __file__, 10, "Evaluating %s", ("E^2",), None)
    record.instance = "E^2"
    record.prime = 2
    entry = json.loads(JSONFormatter().format(record))
    assert entry["message"] == "Evaluating E^2"
    assert entry["level"] == "INFO"
    assert entry["instance"] == "E^2"
    assert entry["prime"] == 2
    assert entry["timestamp"].endswith("Z")
    assert "seed" not in entry


def test_resolve_level_order(monkeypatch):
    monkeypatch.setattr(logger_module, "_level_override", None)
    monkeypatch.delenv("LOG_LEVEL", raising=False)
    assert resolve_level() == logging.WARNING
    monkeypatch.setenv("LOG_LEVEL", "info")
    assert resolve_level() == logging.INFO
    assert resolve_level("debug") == logging.DEBUG


def test_set_level_relevels_existing_loggers(monkeypatch):
    monkeypatch.delenv("LOG_LEVEL", raising=False)
    log = get_logger("edcert.test_relevel")
    set_level("ERROR")
    assert log.level == logging.ERROR
    set_level(None)
    assert log.level == logging.WARNING
    assert len(get_logger("edcert.test_relevel").handlers) == 1
