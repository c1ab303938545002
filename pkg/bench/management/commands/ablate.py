# Django imports
from django.core.management.base import BaseCommand, CommandError

# Python imports
import json
from pathlib import Path

# Local imports
from bench.ablation import AblationMatrix, run_ablation
from bench.cli import add_override_arguments, overrides_from_options
from bench.reports import comparison_text, emit_ablation
from bench.tasks import run_ablation_task
from utils.conf import bench_setting
from utils.exceptions import SpectralBenchError


class Command(BaseCommand):
    help = 'Run an ablation matrix (YAML) and print the comparison table.'

    def add_arguments(self, parser):
        parser.add_argument('matrix', help='Ablation matrix file (YAML).')
        add_override_arguments(parser)

    def handle(self, *args, **options):
        overrides = overrides_from_options(options)
        output_dir = overrides.pop('output_dir', None)
        try:
            matrix = AblationMatrix.from_file(options['matrix'], overrides=overrides)
        except SpectralBenchError as e:
            raise CommandError(f'{e.reason}: {e}') from e
        output_dir = output_dir or matrix.base.output_dir or bench_setting('REPORT_DIR')

        if options['run_async']:
            result = run_ablation_task.delay(str(Path(options['matrix']).resolve()), overrides, output_dir)
            self.stdout.write(json.dumps({'task_id': result.id}))
            return

        try:
            result = run_ablation(matrix)
            paths = emit_ablation(result, output_dir)
        except SpectralBenchError as e:
            raise CommandError(f'{e.reason}: {e}') from e

        self.stdout.write(comparison_text(result.table, title=matrix.name), ending='')
        for name, reason in result.failures:
            self.stderr.write(f'{name}: {reason}')
        for path in paths:
            self.stdout.write(str(path))
