# experiments/admin.py
from django.contrib import admin

from .models import DiagnosticsSample, SimulationRun, VerificationReport


class DiagnosticsSampleInline(admin.TabularInline):
    model = DiagnosticsSample
    extra = 0
    can_delete = False
    fields = ("time", "energy", "entropy", "rel_entropy", "entropy_production")
    readonly_fields = fields


@admin.register(SimulationRun)
class SimulationRunAdmin(admin.ModelAdmin):
    list_display = ("id", "kind", "scenario", "status", "final_rel_entropy", "decay_rate", "max_conservation_drift", "criado_em")
    list_filter = ("kind", "status", "scenario")
    search_fields = ("scenario", "output_dir", "sweep_parameter")
    readonly_fields = ("criado_em", "finalizado_em", "config")
    inlines = [DiagnosticsSampleInline]
    list_per_page = 50


@admin.register(VerificationReport)
class VerificationReportAdmin(admin.ModelAdmin):
    list_display = ("id", "suite", "passed", "criado_em")
    list_filter = ("suite", "passed")
    readonly_fields = ("criado_em", "config", "metrics", "report")
