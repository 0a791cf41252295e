# experiments/api_urls.py
from django.urls import path

from .api_views import SimulationRunDetailView, SimulationRunListView, VerificationReportListView

app_name = "api_experiments"

urlpatterns = [
    path("runs/", SimulationRunListView.as_view(), name="run-list"),
    path("runs/<int:pk>/", SimulationRunDetailView.as_view(), name="run-detail"),
    path("reports/", VerificationReportListView.as_view(), name="report-list"),
]
