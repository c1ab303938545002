"""
Command-line flags shared by the ``run`` and ``ablate`` commands. Each
flag overrides one dotted key of the run config.
"""
# Django imports
from django.core.management.base import CommandError

# Local imports
from backend.factory import BACKEND_KINDS
from spectral.modalities import ALL_MODALITIES, ModalityKind

OVERRIDE_FLAGS = (
    # (flag, dest, config key, argparse kwargs)
    ('--backend', 'backend_kind', 'backend.kind', {'choices': BACKEND_KINDS}),
    ('--model', 'model_id', 'backend.model_id', {}),
    ('--endpoint', 'endpoint_url', 'backend.endpoint_url', {}),
    ('--fixture-dir', 'fixture_dir', 'backend.fixture_dir', {}),
    ('--cache-dir', 'cache_dir', 'backend.cache_dir', {}),
    ('--rate-limit', 'rate_limit', 'backend.rate_limit', {'type': int}),
    ('--max-in-flight', 'max_in_flight', 'backend.max_in_flight', {'type': int}),
    ('--sample-limit', 'sample_limit', 'sample_limit', {'type': int}),
    ('--seed', 'seed', 'seed', {'type': int}),
    ('--workers', 'workers', 'workers', {'type': int}),
    ('--averaging', 'averaging', 'averaging', {'choices': ('samples', 'micro')}),
    ('--output-dir', 'output_dir', 'output_dir', {}),
)


def add_override_arguments(parser):
    for flag, dest, key, kwargs in OVERRIDE_FLAGS:
        parser.add_argument(flag, dest=dest, help=f'Overrides `{key}`.', **kwargs)
    parser.add_argument('--no-cache', action='store_true', help='Disable the response cache.')
    parser.add_argument('--async', dest='run_async', action='store_true', help='Queue the work on Celery.')


def overrides_from_options(options):
    overrides = {key: options.get(dest) for _, dest, key, _ in OVERRIDE_FLAGS}
    if options.get('no_cache'):
        overrides['backend.cache'] = False
    return {key: value for key, value in overrides.items() if value is not None}


def parse_modalities(value):
    if not value or value == 'all':
        return ALL_MODALITIES
    try:
        return tuple(ModalityKind.parse(token) for token in value.split(','))
    except ValueError as e:
        raise CommandError(str(e)) from e
