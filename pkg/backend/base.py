# Python imports
import abc
import threading
from collections import Counter
from contextlib import contextmanager
from contextvars import ContextVar

# Local imports
from .messages import ModelRequest, ModelResponse

# Stats objects that also receive every increment made in the current context.
_meters = ContextVar('backend_meters', default=())


class BackendStats:
    """Thread-safe counters."""

    def __init__(self):
        self._counts = Counter()
        self._lock = threading.Lock()

    def incr(self, name, amount=1):
        self._add(name, amount)
        for meter in _meters.get():
            meter._add(name, amount)

    def _add(self, name, amount):
        with self._lock:
            self._counts[name] += amount

    def snapshot(self):
        with self._lock:
            return dict(sorted(self._counts.items()))


@contextmanager
def metering(stats: BackendStats):
    """
    Count every backend event raised by this thread inside the block into
    ``stats`` as well, whichever backend in a shared chain raised it.
    """
    token = _meters.set(_meters.get() + (stats,))
    try:
        yield stats
    finally:
        _meters.reset(token)


class Backend(abc.ABC):
    """A vision-language model endpoint. Implementations must be thread-safe."""

    def __init__(self):
        self.stats = BackendStats()

    @property
    @abc.abstractmethod
    def identity(self) -> str:
        ...

    @abc.abstractmethod
    def send(self, request: ModelRequest) -> ModelResponse:
        ...

    def collect_stats(self):
        """Counters of this backend merged with those of any wrapped backend."""
        merged = Counter(self.stats.snapshot())
        inner = getattr(self, 'inner', None)
        if inner is not None:
            merged.update(inner.collect_stats())
        return dict(sorted(merged.items()))

    def close(self):
        inner = getattr(self, 'inner', None)
        if inner is not None:
            inner.close()

