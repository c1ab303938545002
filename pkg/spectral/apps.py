from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class SpectralConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'spectral'
    verbose_name = _('Pseudo-image rendering')
