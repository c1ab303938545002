# Django imports
from django.core.management.base import BaseCommand, CommandError

# Local imports
from bench.models import EvalRun
from bench.reports import emit_report, to_table
from bench.runner import report_from_run
from utils.exceptions import SpectralBenchError


class Command(BaseCommand):
    help = 'Re-emit reports from the stored per-sample records of finished runs.'

    def add_arguments(self, parser):
        parser.add_argument('runs', nargs='*', type=int, help='Run ids.')
        parser.add_argument('--digest', default=None, help='Select runs by config digest (prefix).')
        parser.add_argument('--ablation', default=None, help='Select the runs of an ablation matrix.')
        parser.add_argument('--reparse', action='store_true', help='Parse and score the stored responses again.')
        parser.add_argument('--output-dir', default=None)
        parser.add_argument('--stem', default=None, help='Name of the combined report files.')

    def handle(self, *args, **options):
        runs = EvalRun.objects.filter(is_active=True, status=EvalRun.STATUS_DONE)
        if options['runs']:
            runs = runs.filter(pk__in=options['runs'])
        if options['digest']:
            runs = runs.filter(config_digest__startswith=options['digest'])
        if options['ablation']:
            runs = runs.filter(ablation=options['ablation'])
        if not (options['runs'] or options['digest'] or options['ablation']):
            raise CommandError('Select runs by id, --digest or --ablation.')
        runs = list(runs.order_by('pk'))
        if not runs:
            raise CommandError('No finished runs match.')

        try:
            reports = [report_from_run(run, reparse=options['reparse']) for run in runs]
            paths = emit_report(reports, options['output_dir'], stem=options['stem']) if options['output_dir'] else []
        except SpectralBenchError as e:
            raise CommandError(f'{e.reason}: {e}') from e

        self.stdout.write(to_table(reports), ending='')
        for path in paths:
            self.stdout.write(str(path))
