"""Order-preserving fan-out for independent jobs."""

from concurrent.futures import ThreadPoolExecutor


def pmap(fn, items, workers=1):
    """``list(map(fn, items))``, optionally on a thread pool.

    Results come back in input order regardless of completion order, so
    output never depends on ``workers``.
    """
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
