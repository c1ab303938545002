# Django imports
from django.db import models
from django.utils.translation import gettext_lazy as _


class TimeStampedModel(models.Model):
    created_at = models.DateTimeField(auto_now_add=True, verbose_name=_('created'))
    updated_at = models.DateTimeField(auto_now=True, verbose_name=_('updated'))
    is_active = models.BooleanField(
        default=True,
        verbose_name=_('active'),
    )

    class Meta:
        abstract = True

    def delete(self, *args, **kwargs):
        self.is_active = False
        self.save()
