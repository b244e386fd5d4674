"""
Logging setup for the kiq command line.

- run_id_var: ContextVar carrying the id of the current CLI command
- RunIdFilter: injects run_id into every LogRecord if missing
- setup_logging: configures the `kiq` logger once (JSON lines or plain text)

Library modules only call logging.getLogger(__name__); handlers are
attached here and nowhere else.
"""

from __future__ import annotations

import logging
import sys
import uuid
from contextvars import ContextVar
from typing import Optional

from pythonjsonlogger.json import JsonFormatter

run_id_var: ContextVar[Optional[str]] = ContextVar('run_id', default=None)

PLAIN_FORMAT = '%(asctime)s [%(levelname)s] [%(name)s] %(message)s'
JSON_FIELDS = '%(asctime)s %(levelname)s %(name)s %(run_id)s %(message)s'

_HANDLER_NAME = 'kiq-stderr'


class RunIdFilter(logging.Filter):
	"""Logging filter that ensures record.run_id is set.

	Priority order:
	- keep an existing record.run_id passed via `extra`
	- otherwise pull from run_id_var (may be None)
	"""

	def filter(self, record: logging.LogRecord) -> bool:
		if not hasattr(record, 'run_id'):
			record.run_id = run_id_var.get()
		return True


def new_run_id() -> str:
	run_id = uuid.uuid4().hex[:12]
	run_id_var.set(run_id)
	return run_id


def setup_logging(level: str = 'INFO', json_output: bool = True) -> logging.Logger:
	"""Attach a single stderr handler to the `kiq` logger, replacing a previous one."""
	logger = logging.getLogger('kiq')
	for handler in list(logger.handlers):
		if handler.get_name() == _HANDLER_NAME:
			logger.removeHandler(handler)

	handler = logging.StreamHandler(sys.stderr)
	handler.set_name(_HANDLER_NAME)
	if json_output:
		handler.setFormatter(JsonFormatter(JSON_FIELDS))
	else:
		handler.setFormatter(logging.Formatter(PLAIN_FORMAT))
	handler.addFilter(RunIdFilter())

	logger.addHandler(handler)
	logger.setLevel(level.upper())
	logger.propagate = False
	return logger
