# Local imports
from utils.exceptions import SpectralBenchError


class BackendError(SpectralBenchError):
    reason = 'backend_error'


class InvalidRequest(BackendError):
    reason = 'invalid_request'


class TransportError(BackendError):
    reason = 'transport_error'


class TransientError(TransportError):
    """A failure worth retrying: timeouts, connection drops, 429 and 5xx."""

    reason = 'transient_error'


class AuthError(BackendError):
    reason = 'auth_error'


class ReplayMiss(BackendError):
    reason = 'replay_miss'


class StorageError(BackendError):
    """Fixture or cache write failed. ``response`` holds the already obtained answer, if any."""

    reason = 'storage_error'

    def __init__(self, message='', response=None, **context):
        super().__init__(message, **context)
        self.response = response
