# Django imports
from django.urls import path

# Local imports
from .views import (
    EvalRunListView,
    EvalRunRetrieveView,
    RunSamplesListView,
    TaskStatusView,
)

urlpatterns = [
    path('runs/', EvalRunListView.as_view(), name='run-list'),
    path('runs/<int:pk>/', EvalRunRetrieveView.as_view(), name='run-retrieve'),
    path('runs/<int:run_id>/samples/', RunSamplesListView.as_view(), name='run-samples-list'),
    path('tasks/<str:task_id>/', TaskStatusView.as_view(), name='task-status'),
]
