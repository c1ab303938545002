# Third Party Packages
from rest_framework import serializers

# Local imports
from .models import EvalRun, SampleRecord


class EvalRunListSerializer(serializers.ModelSerializer):
    """Run summary without the embedded report."""

    class Meta:
        model = EvalRun
        fields = (
            'id', 'name', 'status', 'config_digest', 'dataset', 'task_kind', 'strategy',
            'modalities', 'ablation', 'backend_identity', 'n_samples', 'aggregate',
            'error', 'created_at', 'updated_at',
        )
        read_only_fields = fields


class EvalRunSerializer(serializers.ModelSerializer):
    sample_count = serializers.IntegerField(source='samples.count', read_only=True)

    class Meta:
        model = EvalRun
        fields = (
            'id', 'name', 'status', 'config', 'config_digest', 'dataset', 'task_kind', 'strategy',
            'modalities', 'ablation', 'backend_identity', 'n_samples', 'sample_count', 'aggregate',
            'report', 'error', 'celery_task_id', 'created_at', 'updated_at',
        )
        read_only_fields = fields


class SampleRecordSerializer(serializers.ModelSerializer):
    class Meta:
        model = SampleRecord
        fields = (
            'id', 'run', 'sample_id', 'parse_mode', 'prediction', 'truth', 'unmatched',
            'precision', 'recall', 'f1', 'correct', 'n_images', 'cache_key', 'error',
            'prompt_text', 'response_text', 'created_at',
        )
        read_only_fields = fields
