# Local imports
from utils.exceptions import SpectralBenchError


class SpectralError(SpectralBenchError):
    reason = 'spectral_error'


class DimensionMismatch(SpectralError):
    reason = 'dimension_mismatch'


class MissingBand(SpectralError):
    reason = 'missing_band'


class UnalignedScene(SpectralError):
    reason = 'unaligned_scene'


class ColormapError(SpectralError):
    reason = 'malformed_colormap'
