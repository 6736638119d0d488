import os
from concurrent.futures import ThreadPoolExecutor


def worker_count(requested=None):
    cap = os.environ.get("OMITLAB_THREADS")
    n = requested if requested is not None else (os.cpu_count() or 1)
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def pmap(fn, items, workers=None):
    """Order-preserving map; runs on a thread pool when more than one worker is allowed."""
    items = list(items)
    n = min(worker_count(workers), len(items) or 1)
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
