"""Worker-count policy: CHERRYPICK_THREADS caps in-process parallelism."""

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("CHERRYPICK_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            return 1
    return max(1, os.cpu_count() or 1)


def map_chunked(fn, items, min_parallel=64):
    """Map fn over items, threading only when it is plausibly worth it."""
    items = list(items)
    workers = thread_count()
    if workers <= 1 or len(items) < min_parallel:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (workers * 4))))
