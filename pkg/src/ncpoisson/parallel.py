"""Order-preserving process fan-out used by the checkers."""
import os
from concurrent.futures import ProcessPoolExecutor


def resolve_jobs(jobs=None):
    env = os.environ.get("NCPOISSON_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, int(jobs or 1))


def chunked(items, n):
    items = list(items)
    if n <= 1 or len(items) <= 1:
        return [items]
    size = -(-len(items) // n)
    return [items[i:i + size] for i in range(0, len(items), size)]


def pmap(func, items, jobs=1):
    """Apply ``func`` to chunks of ``items`` and return results in input order.

    ``func`` takes a list and returns a list. With one job everything runs
    in-process, so results never depend on the job count.
    """
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return func(items)
    chunks = chunked(items, jobs * 4)
    out = []
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        for part in ex.map(func, chunks):
            out.extend(part)
    return out
