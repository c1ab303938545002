# Python imports
from dataclasses import dataclass, field
from typing import Mapping, Tuple
from logging import getLogger

# Third party imports
import numpy as np

# Local imports
from .bands import BandId, BandRaster, MultiSpectralScene, FINEST_RESOLUTION
from .exceptions import IncompatibleGeometry, DegenerateRange

# Constants
logger = getLogger(__name__)

SCENE_BOUNDS = 'scene'
FIXED_BOUNDS = 'fixed'
DEFAULT_FIXED_RANGE = (0, 2000)


def align_to_common_grid(scene: MultiSpectralScene, target: int = FINEST_RESOLUTION) -> MultiSpectralScene:
    """
    Upsample every band onto the ``target`` grid by nearest-neighbor pixel
    replication. Bands already at ``target`` are passed through untouched.
    """
    if target <= 0:
        raise IncompatibleGeometry(f"Target resolution must be positive, got {target}")

    extents = set()
    for raster in scene.bands.values():
        if raster.resolution < target or raster.resolution % target:
            raise IncompatibleGeometry(
                f"{raster.band.value} at {raster.resolution} m cannot be replicated onto a {target} m grid",
                band=raster.band.value,
            )
        extents.add((raster.width * raster.resolution, raster.height * raster.resolution))

    if len(extents) > 1:
        raise IncompatibleGeometry(
            f"Scene {scene.scene_id}: band footprints disagree ({sorted(extents)} meters)",
            scene_id=scene.scene_id,
        )

    aligned = {}
    for band, raster in scene.bands.items():
        factor = raster.resolution // target
        if factor == 1:
            aligned[band] = raster
            continue
        values = np.repeat(np.repeat(raster.values, factor, axis=0), factor, axis=1)
        aligned[band] = BandRaster(
            band=band,
            values=values,
            native_resolution=raster.native_resolution,
            resolution=target,
        )

    return MultiSpectralScene(scene_id=scene.scene_id, bands=aligned)


def normalize_band(raster: BandRaster, lo, hi) -> np.ndarray:
    """clamp((v - lo) / (hi - lo), 0, 1) for every pixel, as float64."""
    if hi <= lo:
        raise DegenerateRange(f"{raster.band.value}: hi ({hi}) must exceed lo ({lo})", band=raster.band.value)
    lo, hi = float(lo), float(hi)
    scaled = (raster.values.astype(np.float64) - lo) / (hi - lo)
    return np.clip(scaled, 0.0, 1.0)


@dataclass(frozen=True)
class NormalizationConfig:
    """
    ``scene`` mode stretches each band between its own min and max;
    ``fixed`` mode uses ``band_ranges[band]`` or ``default_range``.
    """

    mode: str = SCENE_BOUNDS
    default_range: Tuple[float, float] = DEFAULT_FIXED_RANGE
    band_ranges: Mapping[BandId, Tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in (SCENE_BOUNDS, FIXED_BOUNDS):
            raise ValueError(f"Unknown normalization mode: {self.mode!r}")
        ranges = {BandId.parse(band): tuple(bounds) for band, bounds in dict(self.band_ranges).items()}
        object.__setattr__(self, 'band_ranges', ranges)
        object.__setattr__(self, 'default_range', tuple(self.default_range))

    @classmethod
    def from_dict(cls, payload):
        payload = payload or {}
        return cls(
            mode=payload.get('mode', SCENE_BOUNDS),
            default_range=payload.get('default_range', DEFAULT_FIXED_RANGE),
            band_ranges=payload.get('band_ranges', {}),
        )

    def to_dict(self):
        return {
            'mode': self.mode,
            'default_range': list(self.default_range),
            'band_ranges': {band.value: list(bounds) for band, bounds in sorted(self.band_ranges.items())},
        }


def band_bounds(raster: BandRaster, config: NormalizationConfig):
    if config.mode == FIXED_BOUNDS:
        return config.band_ranges.get(raster.band, config.default_range)
    if raster.values.size == 0:
        return 0, 0
    return int(raster.values.min()), int(raster.values.max())


def normalize_for_rendering(raster: BandRaster, config: NormalizationConfig) -> np.ndarray:
    """
    Normalize with the configured bounds. A constant band under per-scene
    bounds maps to 0 everywhere; a fixed range with hi <= lo is an error.
    """
    lo, hi = band_bounds(raster, config)
    if config.mode == SCENE_BOUNDS and hi <= lo:
        logger.debug(f"{raster.band.value} is constant ({lo}); rendering it as zeros")
        return np.zeros(raster.values.shape, dtype=np.float64)
    return normalize_band(raster, lo, hi)
