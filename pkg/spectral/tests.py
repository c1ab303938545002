# Django imports
from django.test import SimpleTestCase

# Python imports
import io
import math
import tempfile
from pathlib import Path

# Third party imports
import numpy as np
from PIL import Image

# Local imports
from bench.testing import synthetic_scene
from raster.bands import BandRaster, MultiSpectralScene
from .colormaps import (
    NDMI_COLORMAP,
    NDVI_COLORMAP,
    NDWI_COLORMAP,
    LinearColormap,
    SegmentedColormap,
    quantize,
)
from .exceptions import ColormapError, DimensionMismatch, MissingBand, UnalignedScene
from .indices import normalized_difference
from .modalities import ALL_MODALITIES, ModalityKind, canonical_order
from .render import PseudoImage, export_png, render_all, render_modality


def scalar_normalize(value, lo, hi):
    if hi <= lo:
        return 0.0
    return min(max((float(value) - float(lo)) / (float(hi) - float(lo)), 0.0), 1.0)


def scalar_quantize(c):
    return int(math.floor(c * 255.0 + 0.5))


def scalar_ramp(x, lo, hi, start, end):
    t = min(max((x - lo) / (hi - lo), 0.0), 1.0)
    return tuple(scalar_quantize(s + t * (e - s)) for s, e in zip(start, end))


def scalar_ndvi_color(x):
    if x < 0.0:
        return scalar_ramp(x, -1.0, 0.0, (1.0, 0.0, 0.0), (1.0, 1.0, 0.0))
    return scalar_ramp(x, 0.0, 1.0, (1.0, 1.0, 0.0), (0.0, 1.0, 0.0))


def scalar_pixels(scene, kind):
    """Reference rendering, one pixel at a time with plain floats."""
    spec = kind.spec
    bounds = {}
    for band in spec.bands:
        values = scene[band].values
        bounds[band] = (int(values.min()), int(values.max()))

    def unit(band, row, col):
        lo, hi = bounds[band]
        return scalar_normalize(scene[band].values[row, col], lo, hi)

    rows, cols = scene[spec.bands[0]].values.shape
    out = []
    for row in range(rows):
        line = []
        for col in range(cols):
            if spec.is_composite:
                line.append(tuple(scalar_quantize(unit(band, row, col)) for band in spec.bands))
                continue
            a, b = (unit(band, row, col) for band in spec.bands)
            x = 0.0 if a + b == 0 else min(max((a - b) / (a + b), -1.0), 1.0)
            if kind is ModalityKind.NDVI:
                line.append(scalar_ndvi_color(x))
            elif kind is ModalityKind.NDWI:
                line.append(scalar_ramp(x, -0.8, 0.8, (1.0, 1.0, 1.0), (0.0, 0.0, 1.0)))
            else:
                line.append(scalar_ramp(x, -1.0, 1.0, (1.0, 0.0, 0.0), (0.0, 0.0, 1.0)))
        out.append(line)
    return out


class ModalityTests(SimpleTestCase):
    def test_parse_accepts_aliases(self):
        self.assertIs(ModalityKind.parse('RGB'), ModalityKind.TRUE_COLOR)
        self.assertIs(ModalityKind.parse('false-color'), ModalityKind.FALSE_COLOR)
        self.assertIs(ModalityKind.parse('NDMI1'), ModalityKind.NDMI1)
        with self.assertRaises(ValueError):
            ModalityKind.parse('evi')

    def test_canonical_order_deduplicates(self):
        kinds = canonical_order(['ndwi', 'rgb', 'ndwi', 'ndvi'])
        self.assertEqual(kinds, (ModalityKind.TRUE_COLOR, ModalityKind.NDVI, ModalityKind.NDWI))

    def test_band_pairs(self):
        self.assertEqual([band.value for band in ModalityKind.NDVI.spec.bands], ['B08', 'B04'])
        self.assertEqual([band.value for band in ModalityKind.NDWI.spec.bands], ['B03', 'B08'])
        self.assertEqual([band.value for band in ModalityKind.NDMI1.spec.bands], ['B8A', 'B11'])
        self.assertEqual([band.value for band in ModalityKind.NDMI2.spec.bands], ['B8A', 'B12'])
        self.assertEqual([band.value for band in ModalityKind.FALSE_COLOR.spec.bands], ['B08', 'B04', 'B03'])


class NormalizedDifferenceTests(SimpleTestCase):
    def setUp(self):
        rng = np.random.default_rng(7)
        self.a = rng.random(10_000)
        self.b = rng.random(10_000)

    def test_bounded(self):
        index = normalized_difference(self.a, self.b)
        self.assertTrue(np.all(index >= -1.0))
        self.assertTrue(np.all(index <= 1.0))

    def test_antisymmetric(self):
        np.testing.assert_array_equal(normalized_difference(self.a, self.b), -normalized_difference(self.b, self.a))

    def test_zero_denominator_is_zero(self):
        index = normalized_difference(np.zeros(3), np.zeros(3))
        np.testing.assert_array_equal(index, np.zeros(3))
        self.assertFalse(np.any(np.isnan(index)))

    def test_single_band_present(self):
        np.testing.assert_array_equal(normalized_difference([0.5, 0.0], [0.0, 0.5]), [1.0, -1.0])

    def test_shape_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            normalized_difference(np.zeros(3), np.zeros(4))


class ColormapTests(SimpleTestCase):
    def assertColor(self, colormap, value, expected):
        self.assertEqual(tuple(int(c) for c in colormap.apply(np.array([value]))[0]), expected)

    def test_ndwi_endpoints(self):
        self.assertColor(NDWI_COLORMAP, -0.8, (255, 255, 255))
        self.assertColor(NDWI_COLORMAP, 0.8, (0, 0, 255))

    def test_ndwi_clamps_outside_domain(self):
        self.assertColor(NDWI_COLORMAP, -1.0, (255, 255, 255))
        self.assertColor(NDWI_COLORMAP, 1.0, (0, 0, 255))

    def test_ndmi_endpoints(self):
        self.assertColor(NDMI_COLORMAP, -1.0, (255, 0, 0))
        self.assertColor(NDMI_COLORMAP, 1.0, (0, 0, 255))

    def test_ndvi_stops(self):
        self.assertColor(NDVI_COLORMAP, -1.0, (255, 0, 0))
        self.assertColor(NDVI_COLORMAP, 0.0, (255, 255, 0))
        self.assertColor(NDVI_COLORMAP, 1.0, (0, 255, 0))

    def test_ndvi_midpoints(self):
        self.assertColor(NDVI_COLORMAP, -0.5, (255, 128, 0))
        self.assertColor(NDVI_COLORMAP, 0.5, (128, 255, 0))

    def test_single_gradient_maps_are_monotone(self):
        values = np.sort(np.random.default_rng(0).uniform(-1.2, 1.2, 2000))
        for name, colormap in (('ndwi', NDWI_COLORMAP), ('ndmi', NDMI_COLORMAP)):
            pixels = colormap.apply(values).astype(int)
            steps = np.diff(pixels, axis=0)
            for channel in range(3):
                direction = int(np.sign(pixels[-1, channel] - pixels[0, channel]))
                with self.subTest(colormap=name, channel=channel):
                    if direction == 0:
                        self.assertFalse(steps[:, channel].any())
                    else:
                        self.assertTrue(np.all(steps[:, channel] * direction >= 0))

    def test_quantize_rounds_half_up(self):
        np.testing.assert_array_equal(quantize([0.0, 0.5, 1.0]), [0, 128, 255])

    def test_invalid_colormaps(self):
        with self.assertRaises(ColormapError):
            LinearColormap(start_color=(0, 0, 0), end_color=(1, 1, 1), domain_lo=1.0, domain_hi=1.0)
        with self.assertRaises(ColormapError):
            LinearColormap(start_color=(0, 0, 2), end_color=(1, 1, 1), domain_lo=0.0, domain_hi=1.0)
        with self.assertRaises(ColormapError):
            SegmentedColormap.from_stops([(0.0, (0, 0, 0))])


class RenderTests(SimpleTestCase):
    def test_matches_scalar_reference(self):
        for seed in range(20):
            scene = synthetic_scene(f'scene{seed}', size=8, seed=seed)
            for image in render_all(scene):
                with self.subTest(seed=seed, kind=image.kind.value):
                    self.assertEqual(image.pixels.tolist(), [[list(p) for p in row] for row in scalar_pixels(scene, image.kind)])

    def test_render_all_uses_canonical_order(self):
        scene = synthetic_scene('order', size=4)
        images = render_all(scene, kinds=['ndmi2', 'rgb', 'ndvi'])
        self.assertEqual([image.kind for image in images], [ModalityKind.TRUE_COLOR, ModalityKind.NDVI, ModalityKind.NDMI2])
        self.assertEqual(len(render_all(scene)), len(ALL_MODALITIES))

    def test_images_match_scene_grid(self):
        scene = synthetic_scene('grid', size=6)
        for image in render_all(scene):
            self.assertEqual((image.height, image.width), (6, 6))

    def test_missing_band(self):
        scene = synthetic_scene('partial', size=4, bands=('B02', 'B03', 'B04'))
        self.assertEqual(render_modality(scene, 'rgb').kind, ModalityKind.TRUE_COLOR)
        with self.assertRaises(MissingBand):
            render_modality(scene, 'ndvi')

    def test_unaligned_scene(self):
        scene = MultiSpectralScene(scene_id='mixed', bands={
            'B8A': BandRaster(band='B8A', values=np.zeros((4, 4), dtype=np.uint16), resolution=10),
            'B11': BandRaster(band='B11', values=np.zeros((2, 2), dtype=np.uint16)),
        })
        with self.assertRaises(UnalignedScene):
            render_modality(scene, 'ndmi1')

    def test_constant_bands_render_zero_index(self):
        flat = np.full((2, 2), 500, dtype=np.uint16)
        scene = MultiSpectralScene(scene_id='flat', bands={
            'B08': BandRaster(band='B08', values=flat),
            'B04': BandRaster(band='B04', values=flat),
        })
        pixels = render_modality(scene, 'ndvi').pixels
        self.assertEqual(pixels[0, 0].tolist(), [255, 255, 0])

    def test_png_roundtrip_keeps_pixels(self):
        image = render_modality(synthetic_scene('png', size=5), 'false_color')
        decoded = np.array(Image.open(io.BytesIO(image.to_png())).convert('RGB'))
        np.testing.assert_array_equal(decoded, image.pixels)

    def test_pixels_are_read_only(self):
        descriptor = ModalityKind.NDWI.spec.descriptor
        image = PseudoImage(kind=ModalityKind.NDWI, pixels=np.zeros((2, 2, 3)), descriptor=descriptor)
        with self.assertRaises(ValueError):
            image.pixels[0, 0, 0] = 1
        with self.assertRaises(ValueError):
            PseudoImage(kind=ModalityKind.NDWI, pixels=np.zeros((2, 2)), descriptor=descriptor)

    def test_descriptor_must_name_its_bands(self):
        pixels = np.zeros((2, 2, 3))
        for descriptor in ('', None, 'Water index using B03'):
            with self.subTest(descriptor=descriptor):
                with self.assertRaises(ValueError):
                    PseudoImage(kind=ModalityKind.NDWI, pixels=pixels, descriptor=descriptor)
        image = PseudoImage(kind='ndmi1', pixels=pixels, descriptor='Moisture from B8A and B11')
        self.assertIs(image.kind, ModalityKind.NDMI1)
        for kind in ALL_MODALITIES:
            PseudoImage(kind=kind, pixels=pixels, descriptor=kind.spec.descriptor)

    def test_export_png(self):
        images = render_all(synthetic_scene('export', size=4), kinds=['rgb', 'ndwi'])
        with tempfile.TemporaryDirectory() as tmp:
            paths = export_png(images, Path(tmp) / 'out', 'export')
            self.assertEqual([path.name for path in paths], ['export_true_color.png', 'export_ndwi.png'])
            for path in paths:
                self.assertTrue(path.read_bytes().startswith(b'\x89PNG'))
