# Third Party Packages
import django_filters

# Local imports
from .models import EvalRun, SampleRecord


class EvalRunFilter(django_filters.FilterSet):
    name = django_filters.CharFilter(lookup_expr='icontains')
    created_after = django_filters.IsoDateTimeFilter(field_name='created_at', lookup_expr='gte')

    class Meta:
        model = EvalRun
        fields = ('dataset', 'status', 'config_digest', 'strategy', 'ablation', 'task_kind')


class SampleRecordFilter(django_filters.FilterSet):
    failed = django_filters.BooleanFilter(method='filter_failed')

    class Meta:
        model = SampleRecord
        fields = ('parse_mode', 'correct')

    def filter_failed(self, queryset, name, value):
        if value:
            return queryset.exclude(error='')
        return queryset.filter(error='')
