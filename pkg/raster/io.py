# Python imports
import json
from pathlib import Path
from logging import getLogger

# Third party imports
import numpy as np
from jsonschema import Draft202012Validator
from PIL import Image, UnidentifiedImageError

# Local imports
from utils.files import atomic_write_bytes, atomic_write_text
from .bands import BandId, BandRaster, MultiSpectralScene
from .exceptions import ManifestError, MissingFile, DecodeError, DuplicateBand

# Constants
logger = getLogger(__name__)

FLAT_DTYPE = np.dtype('<u2')
FLAT_SUFFIX = '.u16'

MANIFEST_SCHEMA = {
    'type': 'object',
    'required': ['scene_id', 'bands'],
    'properties': {
        'scene_id': {'type': 'string', 'minLength': 1},
        'bands': {
            'type': 'array',
            'items': {
                'type': 'object',
                'required': ['band', 'path'],
                'properties': {
                    'band': {'type': 'string'},
                    'path': {'type': 'string', 'minLength': 1},
                    'resolution': {'enum': [10, 20, 60]},
                },
            },
        },
    },
}

SIDECAR_SCHEMA = {
    'type': 'object',
    'required': ['width', 'height'],
    'properties': {
        'width': {'type': 'integer', 'minimum': 1},
        'height': {'type': 'integer', 'minimum': 1},
        'dtype': {'enum': ['u16']},
        'order': {'enum': ['row-major']},
        'band': {'type': 'string'},
    },
}

manifest_validator = Draft202012Validator(MANIFEST_SCHEMA)
sidecar_validator = Draft202012Validator(SIDECAR_SCHEMA)


def read_json(path, validator, error_class):
    path = Path(path)
    if not path.exists():
        raise MissingFile(f"File not found: {path}", path=str(path))
    try:
        payload = json.loads(path.read_text(encoding='utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise error_class(f"Invalid JSON in {path}: {e}", path=str(path)) from e

    errors = sorted(validator.iter_errors(payload), key=lambda err: list(err.path))
    if errors:
        first = errors[0]
        location = '/'.join(str(part) for part in first.path) or '<root>'
        raise error_class(f"{path}: {location}: {first.message}", path=str(path))
    return payload


def sidecar_path(payload_path):
    return Path(payload_path).with_suffix('.json')


def decode_flat_matrix(path, band):
    """Little-endian uint16 payload described by a JSON sidecar next to it."""
    path = Path(path)
    meta = read_json(sidecar_path(path), sidecar_validator, DecodeError)

    if meta.get('band') and BandId.parse(meta['band']) != band:
        raise DecodeError(f"{path} holds {meta['band']}, manifest says {band.value}", path=str(path))
    if not path.exists():
        raise MissingFile(f"File not found: {path}", path=str(path))

    data = path.read_bytes()
    width, height = meta['width'], meta['height']
    expected = width * height * FLAT_DTYPE.itemsize
    if len(data) != expected:
        raise DecodeError(
            f"{path}: payload is {len(data)} bytes, sidecar implies {expected}",
            path=str(path),
        )
    return np.frombuffer(data, dtype=FLAT_DTYPE).reshape(height, width)


def decode_tiff(path, band):
    path = Path(path)
    if not path.exists():
        raise MissingFile(f"File not found: {path}", path=str(path))
    try:
        with Image.open(path) as im:
            im.load()
            if len(im.getbands()) != 1:
                raise DecodeError(f"{path}: expected a single-band TIFF, got {im.mode}", path=str(path))
            values = np.array(im)
    except (UnidentifiedImageError, OSError) as e:
        raise DecodeError(f"{path}: {e}", path=str(path)) from e

    if not np.issubdtype(values.dtype, np.integer):
        raise DecodeError(f"{path}: expected integer digital numbers, got {values.dtype}", path=str(path))
    return values


DECODERS = {
    '.tif': decode_tiff,
    '.tiff': decode_tiff,
}


def decode_band(path, band):
    decoder = DECODERS.get(Path(path).suffix.lower(), decode_flat_matrix)
    return decoder(path, band)


def load_scene(manifest_path) -> MultiSpectralScene:
    """
    Decode every band listed in a scene manifest. Bands keep their native
    grids; alignment is a separate step.
    """
    manifest_path = Path(manifest_path)
    manifest = read_json(manifest_path, manifest_validator, ManifestError)
    root = manifest_path.parent

    bands = {}
    for entry in manifest['bands']:
        band = BandId.parse(entry['band'])
        if band in bands:
            raise DuplicateBand(f"{manifest_path}: {band.value} listed twice", band=band.value)

        band_path = Path(entry['path'])
        if not band_path.is_absolute():
            band_path = root / band_path
        bands[band] = BandRaster(
            band=band,
            values=decode_band(band_path, band),
            resolution=entry.get('resolution'),
        )

    logger.debug(f"Loaded scene {manifest['scene_id']} with {len(bands)} bands from {manifest_path}")
    return MultiSpectralScene(scene_id=manifest['scene_id'], bands=bands)


def write_flat_band(path, values, band=None):
    path = Path(path)
    values = np.asarray(values)
    if values.size and (values.min() < 0 or values.max() > np.iinfo(FLAT_DTYPE).max):
        raise DecodeError(f"{path}: values do not fit in u16", path=str(path))

    height, width = values.shape
    meta = {'width': width, 'height': height, 'dtype': 'u16', 'order': 'row-major'}
    if band is not None:
        meta['band'] = BandId.parse(band).value
    atomic_write_bytes(path, values.astype(FLAT_DTYPE).tobytes(order='C'))
    atomic_write_text(sidecar_path(path), json.dumps(meta, sort_keys=True))


def save_scene(scene: MultiSpectralScene, directory) -> Path:
    """Write ``scene`` as flat-matrix bands plus a manifest; returns the manifest path."""
    directory = Path(directory)
    entries = []
    for band, raster in scene.bands.items():
        file_name = f'{band.value}{FLAT_SUFFIX}'
        write_flat_band(directory / file_name, raster.values, band=band)
        entries.append({'band': band.value, 'path': file_name, 'resolution': raster.resolution})

    manifest_path = directory / 'manifest.json'
    atomic_write_text(manifest_path, json.dumps({'scene_id': scene.scene_id, 'bands': entries}, indent=2))
    return manifest_path
