from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class RasterConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'raster'
    verbose_name = _('Raster ingestion')
