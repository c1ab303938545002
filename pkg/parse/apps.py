from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class ParseConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'parse'
    verbose_name = _('Answer parsing')
