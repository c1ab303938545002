# Django imports
from django.core.management.base import BaseCommand, CommandError

# Local imports
from bench.cli import parse_modalities
from raster.grid import NormalizationConfig, align_to_common_grid
from raster.io import load_scene
from spectral.render import RenderConfig, export_png, render_all
from utils.conf import bench_setting
from utils.exceptions import SpectralBenchError


class Command(BaseCommand):
    help = 'Render the pseudo-images of a scene manifest as PNG files.'

    def add_arguments(self, parser):
        parser.add_argument('manifest', help='Scene manifest (JSON).')
        parser.add_argument('--out', required=True, help='Output directory.')
        parser.add_argument('--modalities', default='all', help='Comma-separated modalities, or "all".')
        parser.add_argument('--target-resolution', type=int, default=None)
        parser.add_argument('--normalization', choices=('scene', 'fixed'), default=None)

    def handle(self, *args, **options):
        normalization = dict(bench_setting('NORMALIZATION', {}))
        if options['normalization']:
            normalization['mode'] = options['normalization']
        target = options['target_resolution'] or bench_setting('TARGET_RESOLUTION', 10)
        try:
            scene = align_to_common_grid(load_scene(options['manifest']), target=target)
            config = RenderConfig(normalization=NormalizationConfig.from_dict(normalization))
            images = render_all(scene, parse_modalities(options['modalities']), config)
            paths = export_png(images, options['out'], scene.scene_id)
        except SpectralBenchError as e:
            raise CommandError(f'{e.reason}: {e}') from e
        except ValueError as e:
            raise CommandError(str(e)) from e
        for path in paths:
            self.stdout.write(str(path))
