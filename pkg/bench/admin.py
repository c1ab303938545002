from django.contrib import admin
from django.utils.translation import gettext_lazy as _

from utils.admin import TimeStampedModelAdmin
from .models import EvalRun, SampleRecord


class SampleRecordInline(admin.TabularInline):
    model = SampleRecord
    fields = ('sample_id', 'parse_mode', 'prediction', 'truth', 'f1', 'correct', 'error')
    readonly_fields = fields
    extra = 0
    can_delete = False
    show_change_link = True


@admin.register(EvalRun)
class EvalRunAdmin(TimeStampedModelAdmin):
    list_display = ('id', 'name', 'status', 'dataset', 'strategy', 'n_samples', 'backend_identity', 'created_at')
    list_filter = ('status', 'dataset', 'task_kind', 'created_at')
    search_fields = ('name', 'config_digest', 'ablation')
    readonly_fields = ('config_digest', 'aggregate', 'report', 'created_at', 'updated_at')
    ordering = ('-created_at',)
    inlines = (SampleRecordInline,)
    save_on_top = True
    fieldsets = (
        (None, {
            'fields': ('name', 'status', 'dataset', 'task_kind', 'strategy', 'modalities', 'ablation')
        }),
        (_('Results'), {
            'fields': ('n_samples', 'aggregate', 'backend_identity', 'error')
        }),
        (_('Audit'), {
            'fields': ('config', 'config_digest', 'report', 'celery_task_id'),
            'classes': ('collapse',),
        }),
    ) + TimeStampedModelAdmin.fieldsets


@admin.register(SampleRecord)
class SampleRecordAdmin(TimeStampedModelAdmin):
    list_display = ('id', 'run', 'sample_id', 'parse_mode', 'f1', 'correct', 'created_at')
    list_filter = ('parse_mode', 'correct', 'created_at')
    search_fields = ('sample_id', 'run__name')
    readonly_fields = ('run', 'prompt_text', 'response_text', 'cache_key', 'created_at', 'updated_at')
    ordering = ('run', 'sample_id')
    fieldsets = (
        (None, {
            'fields': ('run', 'sample_id', 'parse_mode', 'prediction', 'truth', 'unmatched')
        }),
        (_('Score'), {
            'fields': ('precision', 'recall', 'f1', 'correct', 'error')
        }),
        (_('Artifacts'), {
            'fields': ('prompt_text', 'response_text', 'n_images', 'cache_key'),
            'classes': ('collapse',),
        }),
    ) + TimeStampedModelAdmin.fieldsets
