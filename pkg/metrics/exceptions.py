# Local imports
from utils.exceptions import SpectralBenchError


class MetricsError(SpectralBenchError):
    reason = 'metrics_error'


class EmptyTruth(MetricsError):
    """A ground-truth record with no labels."""

    reason = 'empty_truth'


class EmptyRun(MetricsError):
    reason = 'empty_run'
