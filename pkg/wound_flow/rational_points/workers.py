import logging
from threading import Thread
from typing import Callable


class PointScanWorker(Thread):
    """Scans a slice of candidate indices and keeps the points found.

    Exceptions are stored on the worker and re-raised by :func:`run_scan`.
    """

    def __init__(self,
                 candidates: range,
                 solve: Callable[[int], list],
                 thread_name: str = "thread_point_scan",
                 thread_daemon: bool = False) -> None:
        Thread.__init__(self, name=thread_name, daemon=thread_daemon)
        self.candidates = candidates
        self.solve = solve
        self.found: list = []
        self.error: Exception | None = None

    def run(self) -> None:
        logging.debug(f"Scanning candidates {self.candidates.start}..{self.candidates.stop - 1}.")
        try:
            for index in self.candidates:
                self.found.extend(self.solve(index))
        except Exception as e:
            logging.exception(e)
            self.error = e


def run_scan(total: int, solve: Callable[[int], list], threads: int = 1) -> list:
    """Apply solve to 0..total-1 on up to `threads` workers and concatenate the results in index order."""
    threads = max(1, min(threads, total)) if total else 1
    chunk = -(-total // threads) if total else 0
    workers = [PointScanWorker(range(i * chunk, min(total, (i + 1) * chunk)), solve, thread_name=f"thread_point_scan_{i}")
               for i in range(threads)]
    if threads == 1:
        workers[0].run()
    else:
        for worker in workers:
            worker.start()
        for worker in workers:
            worker.join()
    results = []
    for worker in workers:
        if worker.error is not None:
            raise worker.error
        results.extend(worker.found)
    return results
