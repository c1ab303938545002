# Python imports
from dataclasses import dataclass
from typing import Optional

# Local imports
from raster.bands import BandId, BAND_RESOLUTION


@dataclass(frozen=True)
class BandCatalogEntry:
    band: BandId
    name: str
    central_wavelength: Optional[float] = None
    resolution: int = None

    def __post_init__(self):
        if self.resolution is None:
            object.__setattr__(self, 'resolution', BAND_RESOLUTION[self.band])

    def line(self) -> str:
        details = f'{self.resolution}m'
        if self.central_wavelength is not None:
            details = f'{self.central_wavelength}nm, {details}'
        return f'{self.band.value}: {self.name} ({details})'


# Listing order of the prompt.
BAND_CATALOG = (
    BandCatalogEntry(BandId.B02, 'Blue'),
    BandCatalogEntry(BandId.B03, 'Green'),
    BandCatalogEntry(BandId.B04, 'Red'),
    BandCatalogEntry(BandId.B05, 'Red Edge', 704.1),
    BandCatalogEntry(BandId.B06, 'Red Edge', 740.5),
    BandCatalogEntry(BandId.B07, 'Red Edge', 782.8),
    BandCatalogEntry(BandId.B08, 'NIR'),
    BandCatalogEntry(BandId.B8A, 'Narrow NIR'),
    BandCatalogEntry(BandId.B01, 'Coastal Aerosol'),
    BandCatalogEntry(BandId.B09, 'Water Vapor'),
    BandCatalogEntry(BandId.B11, 'SWIR', 1613.7),
    BandCatalogEntry(BandId.B12, 'SWIR', 2202.4),
)


def catalog_lines():
    return [entry.line() for entry in BAND_CATALOG]
