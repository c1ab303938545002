# Django imports
from django.db import models
from django.utils.translation import gettext_lazy as _

# Local imports
from utils.models import TimeStampedModel


class EvalRun(TimeStampedModel):
    STATUS_PENDING = 'pending'
    STATUS_RUNNING = 'running'
    STATUS_DONE = 'done'
    STATUS_FAILED = 'failed'
    STATUS_CHOICES = [
        (STATUS_PENDING, _('pending')),
        (STATUS_RUNNING, _('running')),
        (STATUS_DONE, _('done')),
        (STATUS_FAILED, _('failed')),
    ]

    name = models.CharField(max_length=255, verbose_name=_('name'))
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default=STATUS_PENDING, verbose_name=_('status'))
    config = models.JSONField(default=dict, verbose_name=_('run config'))
    config_digest = models.CharField(max_length=64, db_index=True, verbose_name=_('config digest'))
    dataset = models.CharField(max_length=64, verbose_name=_('dataset'))
    task_kind = models.CharField(max_length=20, blank=True, verbose_name=_('task kind'))
    strategy = models.CharField(max_length=128, verbose_name=_('strategy'))
    modalities = models.JSONField(default=list, verbose_name=_('modalities'))
    ablation = models.CharField(max_length=255, blank=True, verbose_name=_('ablation matrix'))
    backend_identity = models.CharField(max_length=255, blank=True, verbose_name=_('backend'))
    n_samples = models.PositiveIntegerField(default=0, verbose_name=_('samples'))
    aggregate = models.JSONField(default=dict, blank=True, verbose_name=_('aggregate'))
    report = models.JSONField(default=dict, blank=True, verbose_name=_('report'))
    error = models.TextField(blank=True, verbose_name=_('error'))
    celery_task_id = models.CharField(max_length=255, blank=True, null=True, verbose_name=_('task id'))

    class Meta:
        verbose_name = _('evaluation run')
        verbose_name_plural = _('evaluation runs')
        indexes = [
            models.Index(fields=['dataset'], name='idx_evalrun_dataset'),
            models.Index(fields=['created_at'], name='idx_evalrun_created_at'),
        ]
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.name} ({self.status})"


class SampleRecord(TimeStampedModel):
    run = models.ForeignKey(
        EvalRun,
        on_delete=models.CASCADE,
        related_name='samples',
        db_index=True,
        verbose_name=_('run'),
    )
    sample_id = models.CharField(max_length=255, verbose_name=_('sample id'))
    prompt_text = models.TextField(verbose_name=_('prompt'))
    response_text = models.TextField(blank=True, verbose_name=_('response'))
    parse_mode = models.CharField(max_length=20, verbose_name=_('parse mode'))
    prediction = models.JSONField(default=list, verbose_name=_('prediction'))
    truth = models.JSONField(default=list, verbose_name=_('truth'))
    unmatched = models.JSONField(default=list, blank=True, verbose_name=_('unmatched tokens'))
    precision = models.FloatField(null=True, blank=True, verbose_name=_('precision'))
    recall = models.FloatField(null=True, blank=True, verbose_name=_('recall'))
    f1 = models.FloatField(null=True, blank=True, verbose_name=_('F1'))
    correct = models.BooleanField(null=True, blank=True, verbose_name=_('correct'))
    n_images = models.PositiveSmallIntegerField(default=0, verbose_name=_('images sent'))
    cache_key = models.CharField(max_length=64, blank=True, verbose_name=_('cache key'))
    error = models.TextField(blank=True, verbose_name=_('error'))

    class Meta:
        verbose_name = _('sample record')
        verbose_name_plural = _('sample records')
        ordering = ['run', 'sample_id']
        constraints = [
            models.UniqueConstraint(fields=['run', 'sample_id'], name='unique_run_sample'),
        ]

    def __str__(self):
        return f"{self.sample_id} in run {self.run_id}"
