# Django imports
from django.conf import settings


def bench_setting(name, default=None):
    """Read a key of the ``SPECTRAL_BENCH`` settings dict."""
    return getattr(settings, 'SPECTRAL_BENCH', {}).get(name, default)
