import logging
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Callable, List, Sequence, TypeVar

from tqdm import tqdm

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def _show_progress(jobs: int) -> bool:
    return jobs > 1 and sys.stderr.isatty()


def run_ordered(func: Callable[[T], R], items: Sequence[T], jobs: int = 1, desc: str = "scanning") -> List[R]:
    """Apply ``func`` to every item and return the results in input order.

    ``func`` must be a picklable top-level function when ``jobs > 1``.
    A failing item is logged with its input and the exception is re-raised.
    """
    items = list(items)
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    if jobs == 1 or len(items) <= 1:
        results = []
        for item in items:
            try:
                results.append(func(item))
            except Exception as exc:
                logger.error(f"{item} generated an exception: {exc}")
                raise
        return results

    results: List[R] = [None] * len(items)
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        future_to_index = {executor.submit(func, item): index for index, item in enumerate(items)}
        with tqdm(total=len(items), desc=desc, disable=not _show_progress(jobs)) as progress:
            for future in as_completed(future_to_index):
                index = future_to_index[future]
                try:
                    results[index] = future.result()
                except Exception as exc:
                    logger.error(f"{items[index]} generated an exception: {exc}")
                    for pending in future_to_index:
                        pending.cancel()
                    raise
                progress.update(1)
    return results
