# src/workers.py
"""Optional thread pool for independent per-coefficient work.

Results are always assembled in input order, so the output does not depend
on GVKIT_THREADS.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from config import GVKIT_THREADS

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """Map `fn` over `items`, in parallel when a thread count is configured."""
    items = list(items)
    n = GVKIT_THREADS if threads is None else threads
    if n <= 0 or len(items) <= 1:
        return [fn(x) for x in items]
    logger.debug("parallel_map: %d items on %d threads", len(items), n)
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
