"""Deterministic partitioning of enumeration spaces across worker processes."""

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from itertools import accumulate, islice, product
from typing import Any, Callable, Iterator, Optional, Sequence

from algebra.errors import EnumerationCapError, ParameterError
from algebra.finite_field import FqContext
from algebra.polynomial import Codes

# Default number of field-tuple evaluations a single run may perform.
DEFAULT_CAP = 200_000_000

# Slices per worker when none is configured.
DEFAULT_CHUNKS_PER_WORKER = 4


def check_cap(projected: int, cap: int, what: str) -> None:
    """Refuse a job whose projected size exceeds the cap.

    Raises:
        EnumerationCapError: If projected > cap.
    """
    if projected > cap:
        raise EnumerationCapError(projected, cap, what)


def check_degrees(degrees: Sequence[int]) -> tuple[int, ...]:
    """Validate a degree vector and return it as a tuple."""
    degrees = tuple(degrees)
    if not degrees:
        raise ParameterError("at least one degree is required")
    if any(not isinstance(d, int) or d < 0 for d in degrees):
        raise ParameterError(f"degrees must be integers >= 0, got {list(degrees)}")
    return degrees


def partition(total: int, parts: int) -> list[tuple[int, int]]:
    """Split [0, total) into at most `parts` contiguous, non-empty slices."""
    parts = max(1, min(parts, total))
    bounds = [total * i // parts for i in range(parts + 1)]
    return [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]


def monic_tuple_count(q: int, degrees: Sequence[int]) -> int:
    return q ** sum(degrees)


def iter_monic_tuples(ctx: FqContext, degrees: Sequence[int], start: int, stop: int) -> Iterator[tuple[Codes, ...]]:
    """Monic tuples of the given degrees whose flat index lies in [start, stop).

    The flat index enumerates the lower coefficients of all entries with
    itertools.product order, the last coefficient of the last entry varying
    fastest.
    """
    offsets = [0] + list(accumulate(degrees))
    spans = [(offsets[i], offsets[i + 1]) for i in range(len(degrees))]
    flat_space = product(range(ctx.q), repeat=offsets[-1])
    for flat in islice(flat_space, start, stop):
        yield tuple(flat[lo:hi] + (1,) for lo, hi in spans)


class PartitionedRunner:
    """Runs a job over contiguous slices of an index space and gathers the partial results.

    A job is a module-level function called as ``job(*args, start, stop)``.
    With one worker everything runs inline; otherwise slices go to a process
    pool. Results come back in slice order whatever the completion order, so
    the merged outcome does not depend on the worker count.
    """

    default_chunks_per_worker = DEFAULT_CHUNKS_PER_WORKER

    def __init__(self, workers: int = 1, chunks_per_worker: Optional[int] = None):
        """Initialize the runner.

        Args:
            workers: Number of worker processes (1 = inline).
            chunks_per_worker: Slices handed to each worker, for load balancing
                (default: the configured value, see configure()).
        """
        if chunks_per_worker is None:
            chunks_per_worker = self.default_chunks_per_worker
        self.workers = max(1, workers)
        self.chunks_per_worker = max(1, chunks_per_worker)
        self.logger = logging.getLogger(self.__class__.__name__)

    @classmethod
    def configure(cls, chunks_per_worker: int) -> None:
        """Set the slice count used by runners built without an explicit one."""
        cls.default_chunks_per_worker = max(1, int(chunks_per_worker))

    def map(self, job: Callable[..., Any], args: tuple, total: int, label: str = "job") -> list[Any]:
        """Run a job over every slice of [0, total).

        Returns:
            Partial results, one per slice, in slice order.
        """
        if self.workers == 1:
            slices = partition(total, 1)
            self.logger.debug(f"{label}: {total:,} items inline")
            return [job(*args, start, stop) for start, stop in slices]

        slices = partition(total, self.workers * self.chunks_per_worker)
        self.logger.debug(f"{label}: {total:,} items in {len(slices)} slices on {self.workers} workers")
        results: list[Any] = [None] * len(slices)

        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            futures = {
                executor.submit(job, *args, start, stop): index
                for index, (start, stop) in enumerate(slices)
            }
            for future in as_completed(futures):
                index = futures[future]
                start, stop = slices[index]
                try:
                    results[index] = future.result()
                except Exception as e:
                    self.logger.error(f"{label}: slice [{start}, {stop}) failed: {e}")
                    raise
                self.logger.debug(f"{label}: slice [{start}, {stop}) done")

        return results

    def count(self, job: Callable[..., Counter], args: tuple, total: int, label: str = "job") -> Counter:
        """Run a counting job and add up the partial tallies."""
        tally: Counter = Counter()
        for partial in self.map(job, args, total, label):
            tally.update(partial)
        return tally
