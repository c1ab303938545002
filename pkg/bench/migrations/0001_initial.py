from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='EvalRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='created')),
                ('updated_at', models.DateTimeField(auto_now=True, verbose_name='updated')),
                ('is_active', models.BooleanField(default=True, verbose_name='active')),
                ('name', models.CharField(max_length=255, verbose_name='name')),
                ('status', models.CharField(choices=[('pending', 'pending'), ('running', 'running'), ('done', 'done'), ('failed', 'failed')], default='pending', max_length=20, verbose_name='status')),
                ('config', models.JSONField(default=dict, verbose_name='run config')),
                ('config_digest', models.CharField(db_index=True, max_length=64, verbose_name='config digest')),
                ('dataset', models.CharField(max_length=64, verbose_name='dataset')),
                ('task_kind', models.CharField(blank=True, max_length=20, verbose_name='task kind')),
                ('strategy', models.CharField(max_length=128, verbose_name='strategy')),
                ('modalities', models.JSONField(default=list, verbose_name='modalities')),
                ('ablation', models.CharField(blank=True, max_length=255, verbose_name='ablation matrix')),
                ('backend_identity', models.CharField(blank=True, max_length=255, verbose_name='backend')),
                ('n_samples', models.PositiveIntegerField(default=0, verbose_name='samples')),
                ('aggregate', models.JSONField(blank=True, default=dict, verbose_name='aggregate')),
                ('report', models.JSONField(blank=True, default=dict, verbose_name='report')),
                ('error', models.TextField(blank=True, verbose_name='error')),
                ('celery_task_id', models.CharField(blank=True, max_length=255, null=True, verbose_name='task id')),
            ],
            options={
                'verbose_name': 'evaluation run',
                'verbose_name_plural': 'evaluation runs',
                'ordering': ['-created_at'],
                'indexes': [
                    models.Index(fields=['dataset'], name='idx_evalrun_dataset'),
                    models.Index(fields=['created_at'], name='idx_evalrun_created_at'),
                ],
            },
        ),
        migrations.CreateModel(
            name='SampleRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='created')),
                ('updated_at', models.DateTimeField(auto_now=True, verbose_name='updated')),
                ('is_active', models.BooleanField(default=True, verbose_name='active')),
                ('sample_id', models.CharField(max_length=255, verbose_name='sample id')),
                ('prompt_text', models.TextField(verbose_name='prompt')),
                ('response_text', models.TextField(blank=True, verbose_name='response')),
                ('parse_mode', models.CharField(max_length=20, verbose_name='parse mode')),
                ('prediction', models.JSONField(default=list, verbose_name='prediction')),
                ('truth', models.JSONField(default=list, verbose_name='truth')),
                ('unmatched', models.JSONField(blank=True, default=list, verbose_name='unmatched tokens')),
                ('precision', models.FloatField(blank=True, null=True, verbose_name='precision')),
                ('recall', models.FloatField(blank=True, null=True, verbose_name='recall')),
                ('f1', models.FloatField(blank=True, null=True, verbose_name='F1')),
                ('correct', models.BooleanField(blank=True, null=True, verbose_name='correct')),
                ('n_images', models.PositiveSmallIntegerField(default=0, verbose_name='images sent')),
                ('cache_key', models.CharField(blank=True, max_length=64, verbose_name='cache key')),
                ('error', models.TextField(blank=True, verbose_name='error')),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='samples', to='bench.evalrun', verbose_name='run')),
            ],
            options={
                'verbose_name': 'sample record',
                'verbose_name_plural': 'sample records',
                'ordering': ['run', 'sample_id'],
                'constraints': [
                    models.UniqueConstraint(fields=('run', 'sample_id'), name='unique_run_sample'),
                ],
            },
        ),
    ]
