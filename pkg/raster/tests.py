# Django imports
from django.test import SimpleTestCase

# Python imports
import json
import tempfile
from pathlib import Path

# Third party imports
import numpy as np
from PIL import Image

# Local imports
from .bands import BAND_RESOLUTION, BandId, BandRaster, MultiSpectralScene
from .exceptions import (
    DecodeError,
    DegenerateRange,
    DuplicateBand,
    IncompatibleGeometry,
    ManifestError,
    MissingFile,
    UnknownBandCode,
)
from .grid import NormalizationConfig, align_to_common_grid, band_bounds, normalize_band, normalize_for_rendering
from .io import load_scene, save_scene, write_flat_band


def native_scene(size=12, seed=0):
    rng = np.random.default_rng(seed)
    bands = {}
    for band in BandId:
        side = size * 10 // BAND_RESOLUTION[band]
        bands[band] = BandRaster(band=band, values=rng.integers(0, 3000, (side, side), dtype=np.uint16))
    return MultiSpectralScene(scene_id='native', bands=bands)


class BandIdTests(SimpleTestCase):
    def test_parse_is_case_insensitive(self):
        self.assertIs(BandId.parse('b8a'), BandId.B8A)
        self.assertIs(BandId.parse(' B02 '), BandId.B02)

    def test_cirrus_band_is_not_delivered(self):
        with self.assertRaises(UnknownBandCode):
            BandId.parse('B10')

    def test_catalog_covers_twelve_bands(self):
        self.assertEqual(len(BandId), 12)
        self.assertEqual(set(BAND_RESOLUTION), set(BandId))


class BandRasterTests(SimpleTestCase):
    def test_native_resolution_comes_from_catalog(self):
        raster = BandRaster(band='B11', values=np.zeros((3, 3), dtype=np.uint16))
        self.assertEqual(raster.native_resolution, 20)
        self.assertEqual(raster.resolution, 20)

    def test_rejects_wrong_native_resolution(self):
        with self.assertRaises(DecodeError):
            BandRaster(band='B02', values=np.zeros((2, 2)), native_resolution=20)

    def test_rejects_negative_counts(self):
        with self.assertRaises(DecodeError):
            BandRaster(band='B02', values=np.array([[1, -1]]))

    def test_rejects_non_grid_values(self):
        with self.assertRaises(DecodeError):
            BandRaster(band='B02', values=np.zeros(4))

    def test_values_are_read_only_copies(self):
        source = np.ones((2, 2), dtype=np.uint16)
        raster = BandRaster(band='B02', values=source)
        source[0, 0] = 7
        self.assertEqual(raster.values[0, 0], 1)
        with self.assertRaises(ValueError):
            raster.values[0, 0] = 3


class AlignmentTests(SimpleTestCase):
    def test_aligned_grids_share_shape(self):
        aligned = align_to_common_grid(native_scene(size=12))
        self.assertTrue(aligned.is_aligned)
        for raster in aligned.bands.values():
            self.assertEqual(raster.values.shape, (12, 12))
            self.assertEqual(raster.resolution, 10)

    def test_nearest_neighbor_replicates_blocks(self):
        scene = native_scene(size=12)
        aligned = align_to_common_grid(scene)
        source = scene['B01'].values
        target = aligned['B01'].values
        for row in range(12):
            for col in range(12):
                self.assertEqual(target[row, col], source[row // 6, col // 6])

    def test_ten_meter_bands_pass_through_unchanged(self):
        scene = native_scene(size=12)
        aligned = align_to_common_grid(scene)
        np.testing.assert_array_equal(aligned['B04'].values, scene['B04'].values)

    def test_alignment_is_idempotent(self):
        once = align_to_common_grid(native_scene(size=12))
        twice = align_to_common_grid(once)
        for band in BandId:
            np.testing.assert_array_equal(once[band].values, twice[band].values)

    def test_disagreeing_footprints_are_rejected(self):
        scene = MultiSpectralScene(scene_id='bad', bands={
            'B02': BandRaster(band='B02', values=np.zeros((4, 4), dtype=np.uint16)),
            'B05': BandRaster(band='B05', values=np.zeros((3, 3), dtype=np.uint16)),
        })
        with self.assertRaises(IncompatibleGeometry):
            align_to_common_grid(scene)

    def test_bands_finer_than_target_are_rejected(self):
        with self.assertRaises(IncompatibleGeometry):
            align_to_common_grid(native_scene(size=12), target=20)


class NormalizationTests(SimpleTestCase):
    def test_normalize_clamps_to_unit_interval(self):
        raster = BandRaster(band='B02', values=np.array([[0, 1000, 2000, 4000]], dtype=np.uint16))
        np.testing.assert_array_equal(normalize_band(raster, 0, 2000), [[0.0, 0.5, 1.0, 1.0]])

    def test_normalize_is_monotone_and_bounded(self):
        rng = np.random.default_rng(7)
        values = np.sort(rng.integers(0, 10000, 500)).astype(np.uint16).reshape(1, -1)
        raster = BandRaster(band='B11', values=values)
        for lo, hi in ((0, 2000), (300, 9000), (float(values.min()), float(values.max()))):
            with self.subTest(lo=lo, hi=hi):
                normalized = normalize_band(raster, lo, hi)[0]
                self.assertTrue(np.all(np.diff(normalized) >= 0))
                self.assertGreaterEqual(normalized.min(), 0.0)
                self.assertLessEqual(normalized.max(), 1.0)

    def test_degenerate_range_is_an_error(self):
        raster = BandRaster(band='B02', values=np.zeros((1, 1), dtype=np.uint16))
        with self.assertRaises(DegenerateRange):
            normalize_band(raster, 5, 5)

    def test_constant_band_under_scene_bounds_is_zero(self):
        raster = BandRaster(band='B02', values=np.full((2, 2), 900, dtype=np.uint16))
        np.testing.assert_array_equal(normalize_for_rendering(raster, NormalizationConfig()), np.zeros((2, 2)))

    def test_fixed_bounds_use_band_override(self):
        config = NormalizationConfig.from_dict({'mode': 'fixed', 'band_ranges': {'B08': [0, 4000]}})
        raster = BandRaster(band='B08', values=np.array([[2000]], dtype=np.uint16))
        self.assertEqual(band_bounds(raster, config), (0, 4000))
        self.assertEqual(normalize_for_rendering(raster, config)[0, 0], 0.5)

    def test_fixed_default_range(self):
        config = NormalizationConfig(mode='fixed')
        raster = BandRaster(band='B03', values=np.array([[500]], dtype=np.uint16))
        self.assertEqual(band_bounds(raster, config), (0, 2000))


class SceneIOTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_save_and_load_keep_values_and_resolution(self):
        scene = align_to_common_grid(native_scene(size=6))
        manifest = save_scene(scene, self.root / 'scene')
        loaded = load_scene(manifest)
        self.assertEqual(loaded.scene_id, 'native')
        for band in BandId:
            np.testing.assert_array_equal(loaded[band].values, scene[band].values)
            self.assertEqual(loaded[band].resolution, 10)

    def test_missing_manifest(self):
        with self.assertRaises(MissingFile):
            load_scene(self.root / 'absent.json')

    def test_malformed_manifest(self):
        path = self.root / 'manifest.json'
        path.write_text(json.dumps({'bands': []}))
        with self.assertRaises(ManifestError):
            load_scene(path)

    def test_duplicate_band(self):
        write_flat_band(self.root / 'B02.u16', np.zeros((2, 2)), band='B02')
        path = self.root / 'manifest.json'
        path.write_text(json.dumps({
            'scene_id': 'dup',
            'bands': [{'band': 'B02', 'path': 'B02.u16'}, {'band': 'b02', 'path': 'B02.u16'}],
        }))
        with self.assertRaises(DuplicateBand):
            load_scene(path)

    def test_unknown_band_code(self):
        path = self.root / 'manifest.json'
        path.write_text(json.dumps({'scene_id': 'x', 'bands': [{'band': 'B13', 'path': 'B13.u16'}]}))
        with self.assertRaises(UnknownBandCode):
            load_scene(path)

    def test_truncated_payload(self):
        write_flat_band(self.root / 'B02.u16', np.zeros((2, 2)), band='B02')
        (self.root / 'B02.u16').write_bytes(b'\x00\x00\x00')
        path = self.root / 'manifest.json'
        path.write_text(json.dumps({'scene_id': 'x', 'bands': [{'band': 'B02', 'path': 'B02.u16'}]}))
        with self.assertRaises(DecodeError):
            load_scene(path)

    def test_missing_band_file(self):
        path = self.root / 'manifest.json'
        path.write_text(json.dumps({'scene_id': 'x', 'bands': [{'band': 'B02', 'path': 'nowhere.u16'}]}))
        with self.assertRaises(MissingFile):
            load_scene(path)

    def test_tiff_band(self):
        values = np.arange(12, dtype=np.uint16).reshape(3, 4)
        Image.fromarray(values).save(self.root / 'B04.tif')
        path = self.root / 'manifest.json'
        path.write_text(json.dumps({'scene_id': 'tif', 'bands': [{'band': 'B04', 'path': 'B04.tif'}]}))
        np.testing.assert_array_equal(load_scene(path)['B04'].values, values)

    def test_corrupt_tiff(self):
        (self.root / 'B04.tif').write_bytes(b'not a tiff')
        path = self.root / 'manifest.json'
        path.write_text(json.dumps({'scene_id': 'tif', 'bands': [{'band': 'B04', 'path': 'B04.tif'}]}))
        with self.assertRaises(DecodeError):
            load_scene(path)
