# experiments/api_views.py
from __future__ import annotations

from django.shortcuts import get_object_or_404

from rest_framework import permissions
from rest_framework.response import Response
from rest_framework.views import APIView

from .models import SimulationRun, VerificationReport
from .serializers import (
    SimulationRunDetailSerializer,
    SimulationRunSerializer,
    VerificationReportSerializer,
)

MAX_ITEMS = 200


# -------------------------------
# Registro de execuções (somente leitura)
# -------------------------------
class SimulationRunListView(APIView):
    """
    Lista as execuções mais recentes.
    Filtros opcionais: ?kind=simulate|sweep, ?scenario=<nome>, ?status=<status>.
    """
    permission_classes = [permissions.AllowAny]

    def get(self, request, *args, **kwargs):
        qs = SimulationRun.objects.all()
        for param in ("kind", "scenario", "status"):
            value = request.query_params.get(param)
            if value:
                qs = qs.filter(**{param: value})
        return Response(SimulationRunSerializer(qs[:MAX_ITEMS], many=True).data)


class SimulationRunDetailView(APIView):
    permission_classes = [permissions.AllowAny]

    def get(self, request, pk: int, *args, **kwargs):
        run = get_object_or_404(SimulationRun.objects.prefetch_related("samples"), pk=pk)
        return Response(SimulationRunDetailSerializer(run).data)


class VerificationReportListView(APIView):
    permission_classes = [permissions.AllowAny]

    def get(self, request, *args, **kwargs):
        qs = VerificationReport.objects.all()
        suite = request.query_params.get("suite")
        if suite:
            qs = qs.filter(suite=suite)
        return Response(VerificationReportSerializer(qs[:MAX_ITEMS], many=True).data)
