# Python imports
import base64
import logging
import time
from logging import getLogger
from urllib.parse import urlsplit

# Third party imports
import httpx
from tenacity import Retrying, before_sleep_log, retry_if_exception_type, stop_after_attempt, wait_exponential

# Local imports
from .base import Backend
from .exceptions import AuthError, TransientError, TransportError
from .limiter import RateLimiter
from .messages import ModelRequest, ModelResponse

# Constants
logger = getLogger(__name__)

RETRY_STATUS_CODES = frozenset([408, 429, 500, 502, 503, 504])
AUTH_STATUS_CODES = frozenset([401, 403])


class GenericMultimodalAdapter:
    """
    Wire schema of a generic "multimodal generate" endpoint: one text part
    followed by inline base64 PNG parts.
    """

    name = 'generic-multimodal'

    def build_payload(self, request: ModelRequest) -> dict:
        parts = [{'text': request.instruction_text}]
        parts.extend(
            {'inline_data': {'mime_type': 'image/png', 'data': base64.b64encode(image).decode('ascii')}}
            for image in request.images
        )
        return {
            'model': request.model_id,
            'contents': [{'role': 'user', 'parts': parts}],
            'generation_config': request.generation_params.to_dict(),
        }

    def parse_text(self, body) -> str:
        if not isinstance(body, dict):
            raise TransportError(f"Unexpected response body type: {type(body).__name__}")
        if isinstance(body.get('text'), str):
            return body['text']
        try:
            parts = body['candidates'][0]['content']['parts']
        except (KeyError, IndexError, TypeError):
            raise TransportError('Response carries neither "text" nor candidates[0].content.parts') from None
        return ''.join(part.get('text', '') for part in parts if isinstance(part, dict))


class HttpBackend(Backend):
    def __init__(
        self,
        endpoint_url,
        model_id,
        api_key='',
        max_attempts=5,
        timeout=60.0,
        backoff=1.0,
        max_backoff=60.0,
        limiter=None,
        adapter=None,
        transport=None,
    ):
        super().__init__()
        if not endpoint_url:
            raise TransportError('The HTTP backend needs an endpoint URL')
        self.endpoint_url = endpoint_url
        self.model_id = model_id
        self.max_attempts = max(1, int(max_attempts))
        self.backoff = backoff
        self.max_backoff = max_backoff
        self.limiter = limiter or RateLimiter()
        self.adapter = adapter or GenericMultimodalAdapter()

        headers = {'Content-Type': 'application/json'}
        if api_key:
            headers['Authorization'] = f'Bearer {api_key}'
        self.client = httpx.Client(headers=headers, timeout=timeout, transport=transport)

    @property
    def identity(self):
        return f'http:{self.model_id}@{urlsplit(self.endpoint_url).netloc}'

    def close(self):
        self.client.close()

    def _attempt(self, request: ModelRequest) -> str:
        self.stats.incr('network_calls')
        with self.limiter:
            try:
                response = self.client.post(self.endpoint_url, json=self.adapter.build_payload(request))
            except httpx.TimeoutException as e:
                raise TransientError(f"Timeout calling {self.endpoint_url}: {e}") from e
            except httpx.TransportError as e:
                raise TransientError(f"Connection error calling {self.endpoint_url}: {e}") from e

        if response.status_code in AUTH_STATUS_CODES:
            raise AuthError(f"Endpoint rejected credentials ({response.status_code})", status=response.status_code)
        if response.status_code in RETRY_STATUS_CODES:
            raise TransientError(f"Endpoint returned {response.status_code}", status=response.status_code)
        if response.status_code >= 400:
            raise TransportError(f"Endpoint returned {response.status_code}: {response.text[:200]}", status=response.status_code)

        try:
            body = response.json()
        except ValueError as e:
            raise TransportError(f"Endpoint returned invalid JSON: {e}") from e
        return self.adapter.parse_text(body)

    def send(self, request: ModelRequest) -> ModelResponse:
        self.stats.incr('requests')
        retrying = Retrying(
            stop=stop_after_attempt(self.max_attempts),
            wait=wait_exponential(multiplier=self.backoff, max=self.max_backoff),
            retry=retry_if_exception_type(TransientError),
            before_sleep=before_sleep_log(logger, logging.WARNING),
            reraise=True,
        )

        started = time.perf_counter()
        try:
            for attempt in retrying:
                with attempt:
                    text = self._attempt(request)
        except TransientError as e:
            self.stats.incr('failures')
            raise TransportError(
                f"Giving up on {request.tag or 'request'} after {self.max_attempts} attempts: {e}",
                tag=request.tag,
            ) from e

        latency_ms = (time.perf_counter() - started) * 1000.0
        logger.debug(f"{self.identity} answered {request.tag or 'request'} in {latency_ms:.0f} ms")
        return ModelResponse(text=text, latency_ms=latency_ms, from_cache=False)
