# Django imports
from django.core.management.base import BaseCommand, CommandError

# Python imports
import json

# Local imports
from bench.cli import add_override_arguments, overrides_from_options
from bench.config import RunConfig
from bench.models import EvalRun
from bench.reports import emit_report, to_table
from bench.runner import run_eval
from bench.tasks import run_eval_task
from utils.conf import bench_setting
from utils.exceptions import SpectralBenchError


class Command(BaseCommand):
    help = 'Evaluate one run config (YAML) and emit its report.'

    def add_arguments(self, parser):
        parser.add_argument('config', help='Run config file (YAML).')
        add_override_arguments(parser)

    def handle(self, *args, **options):
        try:
            config = RunConfig.from_file(options['config'], overrides=overrides_from_options(options))
        except SpectralBenchError as e:
            raise CommandError(f'{e.reason}: {e}') from e

        if options['run_async']:
            run = EvalRun.objects.create(
                name=config.name,
                config=config.to_dict(),
                config_digest=config.digest,
                dataset=config.dataset.adapter,
                strategy=config.strategy.label,
                modalities=[kind.value for kind in config.modalities],
            )
            result = run_eval_task.delay(config.to_dict(), run_id=run.pk)
            run.celery_task_id = result.id
            run.save(update_fields=['celery_task_id', 'updated_at'])
            self.stdout.write(json.dumps({'run_id': run.pk, 'task_id': result.id}))
            return

        try:
            report = run_eval(config)
            paths = emit_report([report], config.output_dir or bench_setting('REPORT_DIR'))
        except SpectralBenchError as e:
            raise CommandError(f'{e.reason}: {e}') from e

        self.stdout.write(to_table([report], title=f'{report.name} (run {report.run_id})'), ending='')
        for path in paths:
            self.stdout.write(str(path))
