# Python imports
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Optional, Tuple

# Local imports
from raster.bands import BandId
from .colormaps import NDVI_COLORMAP, NDWI_COLORMAP, NDMI_COLORMAP


class ModalityKind(str, Enum):
    """Declaration order is the canonical image order."""

    TRUE_COLOR = 'true_color'
    FALSE_COLOR = 'false_color'
    NDVI = 'ndvi'
    NDWI = 'ndwi'
    NDMI1 = 'ndmi1'
    NDMI2 = 'ndmi2'

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace('-', '').replace(' ', '_')
        aliases = {'rgb': cls.TRUE_COLOR, 'truecolor': cls.TRUE_COLOR, 'falsecolor': cls.FALSE_COLOR}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"Unknown modality: {value!r}") from None

    @property
    def spec(self):
        return MODALITIES[self]


@dataclass(frozen=True)
class ModalitySpec:
    """
    ``bands`` is the channel triple for composites and the (a, b) pair of
    (a - b) / (a + b) for indices.
    """

    kind: ModalityKind
    label: str
    bands: Tuple[BandId, ...]
    descriptor: str
    colormap: Optional[object] = None

    @property
    def is_composite(self):
        return self.colormap is None


MODALITIES = MappingProxyType({
    ModalityKind.TRUE_COLOR: ModalitySpec(
        kind=ModalityKind.TRUE_COLOR,
        label='RGB',
        bands=(BandId.B04, BandId.B03, BandId.B02),
        descriptor='Composited from B04, B03, B02 (natural color as seen by the eye)',
    ),
    ModalityKind.FALSE_COLOR: ModalitySpec(
        kind=ModalityKind.FALSE_COLOR,
        label='False Color',
        bands=(BandId.B08, BandId.B04, BandId.B03),
        descriptor=(
            'Composited from B08, B04, B03 (near-infrared shown as red, so healthy '
            'vegetation appears bright red)'
        ),
    ),
    ModalityKind.NDVI: ModalitySpec(
        kind=ModalityKind.NDVI,
        label='NDVI',
        bands=(BandId.B08, BandId.B04),
        descriptor=(
            'Normalized Difference Vegetation Index (Red-Yellow-Green map) using B08, B04; '
            'green represents green vegetation, red represents bare or non-vegetated surfaces'
        ),
        colormap=NDVI_COLORMAP,
    ),
    ModalityKind.NDWI: ModalitySpec(
        kind=ModalityKind.NDWI,
        label='NDWI',
        bands=(BandId.B03, BandId.B08),
        descriptor=(
            'Normalized Difference Water Index (range -0.8 to 0.8) using B03, B08 with '
            'linear colormap [(1, 1, 1) to (0, 0, 1)]; blue is indicative of open water'
        ),
        colormap=NDWI_COLORMAP,
    ),
    ModalityKind.NDMI1: ModalitySpec(
        kind=ModalityKind.NDMI1,
        label='NDMI-1',
        bands=(BandId.B8A, BandId.B11),
        descriptor=(
            'Moisture Index using B8A, B11 with linear colormap [(1, 0, 0) to (0, 0, 1)]; '
            'blue is indicative of moisture, red of dry surfaces'
        ),
        colormap=NDMI_COLORMAP,
    ),
    ModalityKind.NDMI2: ModalitySpec(
        kind=ModalityKind.NDMI2,
        label='NDMI-2',
        bands=(BandId.B8A, BandId.B12),
        descriptor=(
            'Moisture Index using B8A, B12 with linear colormap [(1, 0, 0) to (0, 0, 1)]; '
            'blue is indicative of moisture, red of dry surfaces'
        ),
        colormap=NDMI_COLORMAP,
    ),
})

ALL_MODALITIES = tuple(ModalityKind)


def canonical_order(kinds):
    """Deduplicated ``kinds`` in canonical image order."""
    wanted = {ModalityKind.parse(kind) for kind in kinds}
    return tuple(kind for kind in ModalityKind if kind in wanted)
