# Python imports
import threading
from logging import getLogger

# Local imports
from .base import Backend
from .exceptions import ReplayMiss, StorageError
from .messages import ModelRequest, ModelResponse
from .store import FixtureStore

# Constants
logger = getLogger(__name__)

LOCK_STRIPES = 64


def as_store(store):
    return store if isinstance(store, FixtureStore) else FixtureStore(store)


class ReplayBackend(Backend):
    """Answers strictly from recorded fixtures; never touches the network."""

    def __init__(self, store):
        super().__init__()
        self.store = as_store(store)

    @property
    def identity(self):
        return 'replay'

    def send(self, request: ModelRequest) -> ModelResponse:
        self.stats.incr('requests')
        key = request.cache_key
        record = self.store.get(key)
        if record is None:
            self.stats.incr('replay_misses')
            raise ReplayMiss(f"No fixture for {request.tag or 'request'} (key {key[:12]})", key=key, tag=request.tag)
        self.stats.incr('replay_hits')
        return ModelResponse(text=record['response']['text'], latency_ms=0.0, from_cache=True)


class CachingBackend(Backend):
    """
    Read-through response cache. Concurrent identical requests are
    serialized on one of a fixed pool of locks chosen by key, so the inner
    backend sees each once.
    """

    def __init__(self, inner: Backend, store):
        super().__init__()
        self.inner = inner
        self.store = as_store(store)
        self._locks = tuple(threading.Lock() for _ in range(LOCK_STRIPES))

    @property
    def identity(self):
        return f'cache({self.inner.identity})'

    def _lock_for(self, key):
        # keys are hex digests
        return self._locks[int(key[:8], 16) % LOCK_STRIPES]

    def send(self, request: ModelRequest) -> ModelResponse:
        self.stats.incr('requests')
        key = request.cache_key
        with self._lock_for(key):
            record = self.store.get(key)
            if record is not None:
                self.stats.incr('cache_hits')
                return ModelResponse(text=record['response']['text'], latency_ms=0.0, from_cache=True)

            self.stats.incr('cache_misses')
            response = self.inner.send(request)
            try:
                self.store.put(key, request, response.text)
            except StorageError as e:
                logger.warning(f"Cache write failed, continuing uncached: {e}")
            return response


class RecordingBackend(Backend):
    """Forwards to ``inner`` and persists every answer as a replayable fixture."""

    def __init__(self, inner: Backend, store):
        super().__init__()
        self.inner = inner
        self.store = as_store(store)

    @property
    def identity(self):
        return f'record({self.inner.identity})'

    def send(self, request: ModelRequest) -> ModelResponse:
        self.stats.incr('requests')
        response = self.inner.send(request)
        try:
            self.store.put(request.cache_key, request, response.text)
        except StorageError as e:
            logger.error(f"Recording {request.tag or 'request'} failed: {e}")
            e.response = response
            raise
        self.stats.incr('recorded')
        return response


def record(request: ModelRequest, inner_backend: Backend, store) -> ModelResponse:
    return RecordingBackend(inner_backend, store).send(request)
