"""
Shared helper functions.
"""

import logging
from concurrent.futures import Executor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def setup_logging(verbose: bool = False, log_file: Optional[str] = None) -> None:
    """
    Configure the root logger once for command line runs.
    - INFO by default, DEBUG when verbose
    - optional log file mirroring the console
    """
    level = logging.DEBUG if verbose else logging.INFO
    fmt = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
    datefmt = "%H:%M:%S"
    logging.basicConfig(level=level, format=fmt, datefmt=datefmt)
    if log_file:
        fh = logging.FileHandler(log_file, mode="w", encoding="utf-8")
        fh.setLevel(level)
        fh.setFormatter(logging.Formatter(fmt, datefmt))
        logging.getLogger().addHandler(fh)


def format_float(value: float) -> str:
    """Shortest representation that parses back to the same double."""
    return repr(float(value))


def ordered_map(fn: Callable[[T], R], items: Iterable[T], executor: Optional[Executor] = None) -> List[R]:
    """
    Apply fn to every item, optionally on an executor.
    Results always come back in input order.
    """
    items = list(items)
    if executor is None or len(items) < 2:
        return [fn(item) for item in items]
    return list(executor.map(fn, items))


def split_evenly(indices: Sequence[int], parts: int) -> List[List[int]]:
    """Split indices into at most `parts` contiguous, non-empty chunks."""
    parts = max(1, min(parts, len(indices)))
    return [list(chunk) for chunk in np.array_split(np.asarray(indices, dtype=int), parts) if len(chunk)]
