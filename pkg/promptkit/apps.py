from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class PromptkitConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'promptkit'
    verbose_name = _('Prompt assembly')
