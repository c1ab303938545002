# Python imports
from dataclasses import dataclass, fields, asdict
from logging import getLogger

# Third party imports
import environ

# Local imports
from utils.conf import bench_setting
from .exceptions import BackendError
from .http import HttpBackend
from .limiter import RateLimiter
from .messages import GenerationParams
from .mocks import EchoBackend, StaticBackend
from .wrappers import CachingBackend, RecordingBackend, ReplayBackend

# Constants
logger = getLogger(__name__)
env = environ.Env()

BACKEND_KINDS = ('http', 'record', 'replay', 'echo', 'static')

# Keys that change what the model is asked; directories and credentials do not.
IDENTITY_FIELDS = ('kind', 'inner', 'model_id', 'endpoint_url', 'temperature', 'max_output_tokens', 'text')


@dataclass(frozen=True)
class BackendSpec:
    kind: str = 'http'
    # Backend wrapped by ``record``.
    inner: str = 'http'
    model_id: str = None
    endpoint_url: str = None
    api_key_env: str = None
    rate_limit: int = None
    max_in_flight: int = None
    max_attempts: int = None
    timeout: float = None
    backoff: float = None
    temperature: float = None
    max_output_tokens: int = None
    cache: bool = True
    cache_dir: str = None
    fixture_dir: str = None
    text: str = ''

    def __post_init__(self):
        if self.kind not in BACKEND_KINDS:
            raise BackendError(f"Unknown backend kind {self.kind!r}; expected one of {BACKEND_KINDS}")
        defaults = {
            'model_id': bench_setting('BACKEND_MODEL_ID', 'gemini-2.5-pro'),
            'endpoint_url': bench_setting('BACKEND_ENDPOINT_URL', ''),
            'rate_limit': bench_setting('BACKEND_RATE_LIMIT', 60),
            'max_in_flight': bench_setting('BACKEND_MAX_IN_FLIGHT', 4),
            'max_attempts': bench_setting('BACKEND_MAX_ATTEMPTS', 5),
            'timeout': bench_setting('BACKEND_TIMEOUT', 60.0),
            'backoff': bench_setting('BACKEND_BACKOFF', 1.0),
            'temperature': bench_setting('TEMPERATURE', 0.0),
            'max_output_tokens': bench_setting('MAX_OUTPUT_TOKENS', 2048),
            'cache_dir': str(bench_setting('CACHE_DIR', 'var/cache')),
            'fixture_dir': str(bench_setting('FIXTURE_DIR', 'var/fixtures')),
        }
        for name, value in defaults.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, value)

    @classmethod
    def from_dict(cls, payload):
        payload = payload or {}
        if isinstance(payload, str):
            payload = {'kind': payload}
        known = {f.name for f in fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise BackendError(f"Unknown backend keys: {sorted(unknown)}")
        return cls(**payload)

    def to_dict(self):
        return asdict(self)

    def identity_dict(self):
        return {name: getattr(self, name) for name in IDENTITY_FIELDS}

    @property
    def generation_params(self):
        return GenerationParams(temperature=self.temperature, max_output_tokens=self.max_output_tokens)

    def api_key(self):
        if self.api_key_env:
            return env.str(self.api_key_env, default='')
        return bench_setting('BACKEND_API_KEY', '')


def build_http_backend(spec: BackendSpec, transport=None):
    limiter = RateLimiter(requests_per_minute=spec.rate_limit, max_in_flight=spec.max_in_flight)
    return HttpBackend(
        endpoint_url=spec.endpoint_url,
        model_id=spec.model_id,
        api_key=spec.api_key(),
        max_attempts=spec.max_attempts,
        timeout=spec.timeout,
        backoff=spec.backoff,
        limiter=limiter,
        transport=transport,
    )


def build_backend(spec: BackendSpec, answers=None, transport=None):
    """
    Instantiate the configured backend chain. ``answers`` (sample id ->
    labels) feeds the echo mock; ``transport`` replaces the HTTP transport.
    """
    def leaf(kind):
        if kind == 'http':
            backend = build_http_backend(spec, transport=transport)
            return CachingBackend(backend, spec.cache_dir) if spec.cache else backend
        if kind == 'echo':
            return EchoBackend(answers or {})
        if kind == 'static':
            return StaticBackend(spec.text)
        raise BackendError(f"{kind!r} cannot be wrapped by a recorder")

    if spec.kind == 'replay':
        backend = ReplayBackend(spec.fixture_dir)
    elif spec.kind == 'record':
        backend = RecordingBackend(leaf(spec.inner), spec.fixture_dir)
    else:
        backend = leaf(spec.kind)

    logger.info(f"Using backend {backend.identity}")
    return backend
