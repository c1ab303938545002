# Local imports
from utils.exceptions import SpectralBenchError


class RasterError(SpectralBenchError):
    reason = 'raster_error'


class ManifestError(RasterError):
    reason = 'malformed_manifest'


class MissingFile(RasterError):
    reason = 'file_not_found'


class DecodeError(RasterError):
    reason = 'corrupt_raster'


class DuplicateBand(RasterError):
    reason = 'duplicate_band'


class UnknownBandCode(RasterError):
    reason = 'unknown_band'


class IncompatibleGeometry(RasterError):
    reason = 'incompatible_geometry'


class DegenerateRange(RasterError):
    reason = 'degenerate_range'
