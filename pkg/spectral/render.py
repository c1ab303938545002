# Python imports
import io
from dataclasses import dataclass, field
from pathlib import Path
from logging import getLogger

# Third party imports
import numpy as np
from PIL import Image

# Local imports
from raster.bands import MultiSpectralScene
from raster.grid import NormalizationConfig, normalize_for_rendering
from utils.files import atomic_write_bytes
from .colormaps import quantize, apply_colormap
from .exceptions import MissingBand, UnalignedScene
from .indices import normalized_difference
from .modalities import ModalityKind, ALL_MODALITIES, canonical_order

# Constants
logger = getLogger(__name__)


@dataclass(frozen=True)
class RenderConfig:
    normalization: NormalizationConfig = field(default_factory=NormalizationConfig)


@dataclass(frozen=True, eq=False)
class PseudoImage:
    kind: ModalityKind
    pixels: np.ndarray
    descriptor: str

    def __post_init__(self):
        kind = ModalityKind.parse(self.kind)
        object.__setattr__(self, 'kind', kind)
        missing = [band.value for band in kind.spec.bands if band.value not in (self.descriptor or '')]
        if not self.descriptor or missing:
            raise ValueError(f"{kind.spec.label} descriptor must name its bands, missing {missing or 'text'}")

        pixels = np.ascontiguousarray(self.pixels, dtype=np.uint8)
        if pixels.ndim != 3 or pixels.shape[2] != 3:
            raise ValueError(f"Pseudo-images are (height, width, 3) RGB grids, got {pixels.shape}")
        pixels.setflags(write=False)
        object.__setattr__(self, 'pixels', pixels)

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def label(self) -> str:
        return self.kind.spec.label

    def to_png(self) -> bytes:
        buffer = io.BytesIO()
        Image.fromarray(self.pixels).save(buffer, format='PNG')
        return buffer.getvalue()

    def file_name(self, scene_id) -> str:
        return f'{scene_id}_{self.kind.value}.png'


def check_renderable(scene: MultiSpectralScene, kind: ModalityKind):
    missing = scene.missing(kind.spec.bands)
    if missing:
        names = ', '.join(band.value for band in missing)
        raise MissingBand(f"{kind.spec.label} needs {names}, absent from scene {scene.scene_id}", kind=kind.value)

    required = [scene[band] for band in kind.spec.bands]
    if len({(raster.width, raster.height) for raster in required}) > 1:
        raise UnalignedScene(
            f"Scene {scene.scene_id} bands for {kind.spec.label} are on different grids; align it first",
            kind=kind.value,
        )


def render_composite(scene: MultiSpectralScene, kind, config: RenderConfig = None) -> PseudoImage:
    """Stack the kind's band triple as (R, G, B), each normalized and scaled to 0-255."""
    kind = ModalityKind.parse(kind)
    config = config or RenderConfig()
    if not kind.spec.is_composite:
        raise ValueError(f"{kind.spec.label} is an index modality, not a composite")
    check_renderable(scene, kind)

    channels = [quantize(normalize_for_rendering(scene[band], config.normalization)) for band in kind.spec.bands]
    return PseudoImage(kind=kind, pixels=np.stack(channels, axis=-1), descriptor=kind.spec.descriptor)


def render_index(scene: MultiSpectralScene, kind, config: RenderConfig = None) -> PseudoImage:
    kind = ModalityKind.parse(kind)
    config = config or RenderConfig()
    check_renderable(scene, kind)

    band_a, band_b = kind.spec.bands
    index = normalized_difference(
        normalize_for_rendering(scene[band_a], config.normalization),
        normalize_for_rendering(scene[band_b], config.normalization),
    )
    return PseudoImage(kind=kind, pixels=apply_colormap(index, kind.spec.colormap), descriptor=kind.spec.descriptor)


def render_modality(scene: MultiSpectralScene, kind, config: RenderConfig = None) -> PseudoImage:
    kind = ModalityKind.parse(kind)
    if kind.spec.is_composite:
        return render_composite(scene, kind, config)
    return render_index(scene, kind, config)


def render_all(scene: MultiSpectralScene, kinds=ALL_MODALITIES, config: RenderConfig = None):
    return [render_modality(scene, kind, config) for kind in canonical_order(kinds)]


def export_png(images, directory, scene_id):
    """Write ``<scene_id>_<kind>.png`` for every image; returns the written paths."""
    directory = Path(directory)
    paths = []
    for image in images:
        path = directory / image.file_name(scene_id)
        atomic_write_bytes(path, image.to_png())
        paths.append(path)
    logger.info(f"Exported {len(paths)} pseudo-images for {scene_id} to {directory}")
    return paths
