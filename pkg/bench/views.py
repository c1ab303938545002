# Django imports
from django.shortcuts import get_object_or_404

# Third Party Packages
from celery.result import AsyncResult
from django_filters.rest_framework import DjangoFilterBackend
from drf_spectacular.utils import extend_schema
from rest_framework import filters, generics, status
from rest_framework.permissions import IsAuthenticated
from rest_framework.response import Response
from rest_framework.views import APIView

# Local imports
from .filters import EvalRunFilter, SampleRecordFilter
from .models import EvalRun, SampleRecord
from .serializers import EvalRunListSerializer, EvalRunSerializer, SampleRecordSerializer


@extend_schema(summary='List evaluation runs', tags=['Runs'])
class EvalRunListView(generics.ListAPIView):
    """
    GET /api/v1/bench/runs/ - List stored runs

    Filter by dataset, status, config_digest, strategy, ablation or name;
    order by created_at or n_samples.
    """
    permission_classes = [IsAuthenticated]
    serializer_class = EvalRunListSerializer
    filter_backends = [DjangoFilterBackend, filters.OrderingFilter, filters.SearchFilter]
    filterset_class = EvalRunFilter
    ordering_fields = ['created_at', 'n_samples', 'name']
    ordering = ['-created_at']
    search_fields = ['name', 'strategy']

    def get_queryset(self):
        return EvalRun.objects.filter(is_active=True)


@extend_schema(summary='Retrieve an evaluation run with its report', tags=['Runs'])
class EvalRunRetrieveView(generics.RetrieveAPIView):
    permission_classes = [IsAuthenticated]
    serializer_class = EvalRunSerializer

    def get_queryset(self):
        return EvalRun.objects.filter(is_active=True)


@extend_schema(summary='List the per-sample audit records of a run', tags=['Runs'])
class RunSamplesListView(generics.ListAPIView):
    """GET /api/v1/bench/runs/<run_id>/samples/ - prompts, responses and scores."""
    permission_classes = [IsAuthenticated]
    serializer_class = SampleRecordSerializer
    filter_backends = [DjangoFilterBackend, filters.OrderingFilter]
    filterset_class = SampleRecordFilter
    ordering_fields = ['sample_id', 'f1']
    ordering = ['sample_id']

    def get_queryset(self):
        run = get_object_or_404(EvalRun.objects.filter(is_active=True), pk=self.kwargs['run_id'])
        return SampleRecord.objects.filter(run=run)


@extend_schema(summary='Status of an asynchronous run', tags=['Runs'])
class TaskStatusView(APIView):
    permission_classes = [IsAuthenticated]

    def get(self, request, task_id):
        run = EvalRun.objects.filter(celery_task_id=task_id).first()
        result = AsyncResult(task_id)
        return Response(
            {'task_id': task_id, 'status': result.status, 'run_id': run.pk if run else None},
            status=status.HTTP_200_OK,
        )
