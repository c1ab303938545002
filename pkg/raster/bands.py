# Python imports
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping

# Third party imports
import numpy as np

# Local imports
from .exceptions import UnknownBandCode, DecodeError


class BandId(str, Enum):
    """Sentinel-2 L2A band identifiers. B10 (cirrus) is not delivered at L2A."""

    B01 = 'B01'
    B02 = 'B02'
    B03 = 'B03'
    B04 = 'B04'
    B05 = 'B05'
    B06 = 'B06'
    B07 = 'B07'
    B08 = 'B08'
    B8A = 'B8A'
    B09 = 'B09'
    B11 = 'B11'
    B12 = 'B12'

    @classmethod
    def parse(cls, code):
        if isinstance(code, cls):
            return code
        try:
            return cls(str(code).strip().upper())
        except ValueError:
            raise UnknownBandCode(f"Unknown band code: {code!r}", band=code) from None


# meters per pixel
BAND_RESOLUTION = MappingProxyType({
    BandId.B02: 10, BandId.B03: 10, BandId.B04: 10, BandId.B08: 10,
    BandId.B05: 20, BandId.B06: 20, BandId.B07: 20, BandId.B8A: 20,
    BandId.B11: 20, BandId.B12: 20,
    BandId.B01: 60, BandId.B09: 60,
})

FINEST_RESOLUTION = min(BAND_RESOLUTION.values())


@dataclass(frozen=True)
class BandRaster:
    """
    One band as a (height, width) grid of non-negative digital numbers.

    ``resolution`` is the pixel size of the grid as stored; it equals
    ``native_resolution`` until the band is resampled onto a common grid.
    """

    band: BandId
    values: np.ndarray
    native_resolution: int = None
    resolution: int = None

    def __post_init__(self):
        band = BandId.parse(self.band)
        object.__setattr__(self, 'band', band)

        catalog_resolution = BAND_RESOLUTION[band]
        native = self.native_resolution or catalog_resolution
        if native != catalog_resolution:
            raise DecodeError(
                f"{band.value} is a {catalog_resolution} m band, got {native} m",
                band=band.value,
            )
        resolution = self.resolution or native
        if resolution > native or native % resolution:
            raise DecodeError(
                f"{band.value} cannot be stored at {resolution} m from a {native} m source",
                band=band.value,
            )
        object.__setattr__(self, 'native_resolution', native)
        object.__setattr__(self, 'resolution', resolution)

        values = np.asarray(self.values)
        if values.ndim != 2:
            raise DecodeError(f"{band.value} grid must be 2-D, got shape {values.shape}", band=band.value)
        if values.size and values.min() < 0:
            raise DecodeError(f"{band.value} contains negative reflectance counts", band=band.value)
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def height(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class MultiSpectralScene:
    scene_id: str
    bands: Mapping[BandId, BandRaster] = field(default_factory=dict)

    def __post_init__(self):
        given = {BandId.parse(band): raster for band, raster in dict(self.bands).items()}
        ordered = {band: given[band] for band in BandId if band in given}
        object.__setattr__(self, 'bands', MappingProxyType(ordered))

    @property
    def reference_band(self):
        """The finest-resolution band present; it defines the scene grid."""
        if not self.bands:
            return None
        return min(self.bands.values(), key=lambda raster: raster.resolution)

    @property
    def grid_width(self) -> int:
        reference = self.reference_band
        return reference.width if reference else 0

    @property
    def grid_height(self) -> int:
        reference = self.reference_band
        return reference.height if reference else 0

    @property
    def is_aligned(self) -> bool:
        return all(
            raster.width == self.grid_width and raster.height == self.grid_height
            for raster in self.bands.values()
        )

    def missing(self, required):
        return [band for band in required if band not in self.bands]

    def __getitem__(self, band):
        return self.bands[BandId.parse(band)]

    def __contains__(self, band):
        return BandId.parse(band) in self.bands
