# Django imports
from django.core.management.base import BaseCommand, CommandError

# Local imports
from bench.cli import parse_modalities
from promptkit.builders import PromptStrategy, build_prompt
from promptkit.vocabulary import load_aliases, load_vocabulary
from raster.grid import NormalizationConfig, align_to_common_grid
from raster.io import load_scene
from spectral.render import RenderConfig, render_all
from utils.conf import bench_setting
from utils.exceptions import SpectralBenchError
from utils.files import atomic_write_text


class Command(BaseCommand):
    help = 'Build the instruction text for a scene and print it or write it to a file.'

    def add_arguments(self, parser):
        parser.add_argument('manifest', help='Scene manifest (JSON).')
        parser.add_argument('--vocabulary', required=True, help='Shipped vocabulary name or JSON path.')
        parser.add_argument('--aliases', default=None, help='Extra alias table (JSON).')
        parser.add_argument('--strategy', choices=('baseline', 'expansion', 'cot'), default='baseline')
        parser.add_argument('--modalities', default='all', help='Comma-separated modalities, or "all".')
        parser.add_argument('--no-band-catalog', action='store_true')
        parser.add_argument('--no-descriptors', action='store_true')
        parser.add_argument('--guides', action='store_true', help='CoT only: append the class guides.')
        parser.add_argument('--out', default=None, help='Write to this file instead of stdout.')

    def handle(self, *args, **options):
        strategy = PromptStrategy(
            variant=options['strategy'],
            include_band_catalog=not options['no_band_catalog'],
            include_image_descriptors=not options['no_descriptors'],
            include_guides=options['guides'],
        )
        try:
            vocabulary = load_vocabulary(options['vocabulary'])
            if options['aliases']:
                vocabulary = vocabulary.with_aliases(load_aliases(options['aliases']))
            target = bench_setting('TARGET_RESOLUTION', 10)
            scene = align_to_common_grid(load_scene(options['manifest']), target=target)
            normalization = NormalizationConfig.from_dict(bench_setting('NORMALIZATION', {}))
            images = render_all(scene, parse_modalities(options['modalities']), RenderConfig(normalization=normalization))
            bundle = build_prompt(images, vocabulary, strategy)
        except SpectralBenchError as e:
            raise CommandError(f'{e.reason}: {e}') from e

        if options['out']:
            atomic_write_text(options['out'], bundle.instruction_text)
            self.stdout.write(options['out'])
        else:
            self.stdout.write(bundle.instruction_text, ending='')
