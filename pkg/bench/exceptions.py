# Local imports
from utils.exceptions import SpectralBenchError


class BenchError(SpectralBenchError):
    reason = 'bench_error'


class DatasetError(BenchError):
    """Unreadable or malformed dataset index, or labels outside the vocabulary."""

    reason = 'dataset_error'


class ConfigError(BenchError):
    reason = 'invalid_config'
