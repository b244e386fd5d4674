"""
File persistence for run artifacts.

JSON goes through orjson (sorted keys, numpy aware), CSV through the csv
module with repr-formatted floats so payloads are byte-deterministic.
Every write lands in a temp file next to the target and is moved into
place with os.replace.
"""

import csv
import io
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Tuple

import orjson

from kiq.errors import ConfigError

logger = logging.getLogger(__name__)

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY


def atomic_write_bytes(path: Path, data: bytes) -> Path:
	path = Path(path)
	path.parent.mkdir(parents=True, exist_ok=True)
	fd, tmp_name = tempfile.mkstemp(prefix=f'.{path.name}.', suffix='.tmp', dir=path.parent)
	try:
		with os.fdopen(fd, 'wb') as fh:
			fh.write(data)
		os.replace(tmp_name, path)
	except BaseException:
		if os.path.exists(tmp_name):
			os.unlink(tmp_name)
		raise
	logger.debug(f'Wrote {len(data)} bytes to {path}')
	return path


def dumps_json(obj: Any) -> bytes:
	return orjson.dumps(obj, option=JSON_OPTIONS) + b'\n'


def format_cell(value: Any) -> str:
	if hasattr(value, 'item'):  # numpy scalar
		value = value.item()
	if isinstance(value, float):
		return repr(value)
	return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> bytes:
	buffer = io.StringIO()
	writer = csv.writer(buffer, lineterminator='\n')
	writer.writerow(header)
	for row in rows:
		writer.writerow([format_cell(value) for value in row])
	return buffer.getvalue().encode('utf-8')


def read_numeric_csv(path: Path, header: Sequence[str]) -> List[Tuple[float, ...]]:
	"""Read a CSV whose header must equal `header`; every cell must parse as a float.

	Errors name the file line so users can find the offending row.
	"""
	path = Path(path)
	if not path.is_file():
		raise ConfigError(f'input file not found: {path}')
	with path.open(newline='', encoding='utf-8') as fh:
		reader = csv.reader(fh)
		found = next(reader, None)
		if found is None:
			raise ConfigError('empty file', location=f'{path.name}:1')
		found = [name.strip() for name in found]
		missing = [name for name in header if name not in found]
		if missing:
			raise ConfigError(f'missing column(s) {", ".join(missing)}', location=f'{path.name}:1')
		if found != list(header):
			raise ConfigError(f'expected header {",".join(header)}, got {",".join(found)}', location=f'{path.name}:1')

		rows: List[Tuple[float, ...]] = []
		for line_no, raw in enumerate(reader, start=2):
			if not raw or all(not cell.strip() for cell in raw):
				continue
			if len(raw) != len(header):
				raise ConfigError(f'row {line_no}: expected {len(header)} columns, got {len(raw)}', location=f'{path.name}:{line_no}')
			try:
				rows.append(tuple(float(cell) for cell in raw))
			except ValueError:
				raise ConfigError(f'row {line_no}: non-numeric value', location=f'{path.name}:{line_no}') from None
	return rows
