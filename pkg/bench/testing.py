"""
Synthetic scenes and indexed datasets for tests and local smoke runs.
"""
# Python imports
import csv
from pathlib import Path

# Third party imports
import numpy as np

# Local imports
from promptkit.vocabulary import load_vocabulary
from raster.bands import BAND_RESOLUTION, BandId, BandRaster, MultiSpectralScene
from raster.io import save_scene

# Constants
MAX_DIGITAL_NUMBER = 4000


def synthetic_scene(scene_id, size=8, seed=0, aligned=True, bands=tuple(BandId)):
    """
    Random 12-band scene. ``aligned`` scenes store every band on the
    ``size`` x ``size`` 10 m grid; otherwise each band keeps its native
    grid and ``size`` must be a multiple of 6.
    """
    rng = np.random.default_rng(seed)
    rasters = {}
    for band in bands:
        band = BandId.parse(band)
        native = BAND_RESOLUTION[band]
        if aligned:
            shape, resolution = (size, size), 10
        else:
            if size % 6:
                raise ValueError(f"Native-grid scenes need a size divisible by 6, got {size}")
            factor = native // 10
            shape, resolution = (size // factor, size // factor), native
        values = rng.integers(0, MAX_DIGITAL_NUMBER, size=shape, dtype=np.uint16)
        rasters[band] = BandRaster(band=band, values=values, resolution=resolution)
    return MultiSpectralScene(scene_id=scene_id, bands=rasters)


def write_dataset(directory, labels_by_sample, size=8, seed=0, aligned=True):
    """
    Write one scene per sample plus ``index.csv`` under ``directory`` and
    return the index path. ``labels_by_sample`` maps sample id -> labels.
    """
    directory = Path(directory)
    rows = []
    for offset, (sample_id, labels) in enumerate(sorted(labels_by_sample.items())):
        scene = synthetic_scene(sample_id, size=size, seed=seed + offset, aligned=aligned)
        manifest = save_scene(scene, directory / 'scenes' / sample_id)
        rows.append((sample_id, manifest.relative_to(directory).as_posix(), ';'.join(labels)))

    index_path = directory / 'index.csv'
    with index_path.open('w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(('sample_id', 'manifest', 'labels'))
        writer.writerows(rows)
    return index_path


def synthetic_labels(vocabulary_name, count, seed=0, max_labels=3):
    """
    Deterministic ground truth over a shipped vocabulary: one class per
    sample for multi-class vocabularies, one to ``max_labels`` otherwise.
    """
    vocabulary = load_vocabulary(vocabulary_name)
    names = vocabulary.names
    rng = np.random.default_rng(seed)
    labels = {}
    for index in range(count):
        size = int(rng.integers(1, max_labels + 1)) if vocabulary.is_multi_label else 1
        chosen = rng.choice(len(names), size=size, replace=False)
        labels[f'S{index:04d}'] = [names[i] for i in sorted(chosen.tolist())]
    return labels
