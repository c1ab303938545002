# Python imports
import threading
import time
from logging import getLogger

# Constants
logger = getLogger(__name__)


class RateLimiter:
    """
    Shared gate for outbound calls: at most ``max_in_flight`` concurrent
    requests, and request starts spaced so that no more than
    ``requests_per_minute`` begin in any minute.
    """

    def __init__(self, requests_per_minute=None, max_in_flight=None, clock=time.monotonic, sleep=time.sleep):
        self.interval = 60.0 / requests_per_minute if requests_per_minute else 0.0
        self.max_in_flight = max_in_flight
        self._slots = threading.BoundedSemaphore(max_in_flight) if max_in_flight else None
        self._lock = threading.Lock()
        self._next_start = None
        self._clock = clock
        self._sleep = sleep
        self.in_flight = 0

    def _reserve_start(self):
        with self._lock:
            now = self._clock()
            start = now if self._next_start is None else max(now, self._next_start)
            self._next_start = start + self.interval
            return start - now

    def __enter__(self):
        if self._slots is not None:
            self._slots.acquire()
        if self.interval:
            delay = self._reserve_start()
            if delay > 0:
                logger.debug(f"Rate limit: waiting {delay:.2f}s")
                self._sleep(delay)
        with self._lock:
            self.in_flight += 1
        return self

    def __exit__(self, exc_type, exc, tb):
        with self._lock:
            self.in_flight -= 1
        if self._slots is not None:
            self._slots.release()
        return False
