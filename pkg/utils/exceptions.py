class SpectralBenchError(Exception):
    """Root of every error raised by the toolkit."""

    reason = 'error'

    def __init__(self, message='', **context):
        super().__init__(message)
        self.context = context
