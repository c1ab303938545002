# Python imports
from dataclasses import dataclass, field
from typing import Tuple

# Local imports
from utils.hashing import canonical_json, sha256_hex
from .exceptions import InvalidRequest


@dataclass(frozen=True)
class GenerationParams:
    temperature: float = 0.0
    max_output_tokens: int = 2048

    def __post_init__(self):
        if self.temperature < 0:
            raise InvalidRequest(f"temperature must be >= 0, got {self.temperature}")
        if int(self.max_output_tokens) <= 0:
            raise InvalidRequest(f"max_output_tokens must be positive, got {self.max_output_tokens}")

    def to_dict(self):
        return {'temperature': float(self.temperature), 'max_output_tokens': int(self.max_output_tokens)}


@dataclass(frozen=True)
class ModelRequest:
    """
    One multimodal generation call. ``tag`` identifies the sample for logs
    and test doubles; it is not part of the cache key.
    """

    model_id: str
    instruction_text: str
    images: Tuple[bytes, ...]
    generation_params: GenerationParams = field(default_factory=GenerationParams)
    tag: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'images', tuple(bytes(image) for image in self.images))
        if not self.instruction_text:
            raise InvalidRequest('instruction_text must be non-empty')
        if not self.images:
            raise InvalidRequest('at least one image payload is required')

    @property
    def cache_key(self) -> str:
        return cache_key(self)


@dataclass(frozen=True)
class ModelResponse:
    text: str
    latency_ms: float = 0.0
    from_cache: bool = False


def cache_key(request: ModelRequest) -> str:
    """SHA-256 over model id, generation params, instruction bytes and each image."""
    return sha256_hex(
        request.model_id.encode('utf-8'),
        canonical_json(request.generation_params.to_dict()).encode('utf-8'),
        request.instruction_text.encode('utf-8'),
        *request.images,
    )
