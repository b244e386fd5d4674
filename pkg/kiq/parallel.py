"""Ordered thread-pool map used by the sweep operations."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from kiq.config import resolve_threads

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def run_ordered(fn: Callable[[T], R], items: Sequence[T], threads: Optional[int] = None) -> List[R]:
	"""Apply fn to every item; results keep the input order whatever the worker count."""
	workers = min(resolve_threads(threads), max(1, len(items)))
	if workers <= 1:
		return [fn(item) for item in items]
	logger.debug(f'Dispatching {len(items)} tasks to {workers} threads')
	with ThreadPoolExecutor(max_workers=workers, thread_name_prefix='kiq') as pool:
		return list(pool.map(fn, items))


def split_chunks(n_items: int, n_chunks: int) -> List[range]:
	"""Contiguous index ranges, sizes differing by at most one."""
	n_chunks = max(1, min(n_chunks, n_items))
	base, extra = divmod(n_items, n_chunks)
	chunks: List[range] = []
	start = 0
	for i in range(n_chunks):
		stop = start + base + (1 if i < extra else 0)
		chunks.append(range(start, stop))
		start = stop
	return chunks
