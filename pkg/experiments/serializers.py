# experiments/serializers.py
from __future__ import annotations

import numpy as np
from rest_framework import serializers

from core.exceptions import InvalidParameterError
from solver.config import MIN_TORUS_CELLS, Scheme
from species.params import ANGULAR_PROFILES, KernelSpec

from .models import DiagnosticsSample, SimulationRun, VerificationReport

SCENARIOS = (
    "two_species_relax",
    "small_amplitude",
    "large_amplitude",
    "standing_wave",
    "explicit",
    "equilibrium",
)


# -------------------------------
# Campos auxiliares
# -------------------------------
class FloatListField(serializers.Field):
    default_error_messages = {"invalid": "Informe números separados por vírgula."}

    def to_internal_value(self, data):
        items = data if isinstance(data, (list, tuple)) else [p for p in str(data).split(",") if p.strip()]
        try:
            return [float(x) for x in items]
        except (TypeError, ValueError):
            self.fail("invalid")

    def to_representation(self, value):
        return ",".join(repr(float(v)) for v in value)


class IntListField(FloatListField):
    default_error_messages = {"invalid": "Informe inteiros separados por vírgula."}

    def to_internal_value(self, data):
        values = super().to_internal_value(data)
        if any(v != int(v) for v in values):
            self.fail("invalid")
        return [int(v) for v in values]


class StrictSerializer(serializers.Serializer):
    """Rejeita chaves desconhecidas em vez de ignorá-las."""

    def to_internal_value(self, data):
        if isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError({k: ["Chave desconhecida."] for k in unknown})
        return super().to_internal_value(data)


# -------------------------------
# Seções da configuração
# -------------------------------
class SpeciesSectionSerializer(StrictSerializer):
    masses    = FloatListField()
    densities = FloatListField()

    def validate_masses(self, value):
        if not value:
            raise serializers.ValidationError("Informe ao menos uma espécie.")
        if any(m <= 0 for m in value):
            raise serializers.ValidationError("Massas devem ser positivas.")
        return value

    def validate_densities(self, value):
        if any(n <= 0 for n in value):
            raise serializers.ValidationError("Densidades devem ser positivas.")
        return value

    def validate(self, attrs):
        if len(attrs["masses"]) != len(attrs["densities"]):
            raise serializers.ValidationError({"densities": ["Deve ter o mesmo número de itens que masses."]})
        return attrs


class KernelSectionSerializer(StrictSerializer):
    gamma         = serializers.FloatField(min_value=0.0, max_value=1.0)
    c_phi         = FloatListField()
    angular       = serializers.ChoiceField(choices=sorted(ANGULAR_PROFILES))
    c_b           = serializers.FloatField()
    collisionless = serializers.BooleanField(required=False, default=False)

    def validate_c_b(self, value):
        if value <= 0:
            raise serializers.ValidationError("c_b deve ser positivo.")
        return value


class GridSectionSerializer(StrictSerializer):
    half_width = serializers.FloatField()
    points     = serializers.IntegerField(min_value=8)

    def validate_half_width(self, value):
        if value <= 0:
            raise serializers.ValidationError("half_width deve ser positivo.")
        return value

    def validate_points(self, value):
        if value % 2:
            raise serializers.ValidationError("points deve ser par.")
        return value


class SphereSectionSerializer(StrictSerializer):
    n_polar   = serializers.IntegerField(min_value=4)
    n_azimuth = serializers.IntegerField(min_value=8)


class WeightSectionSerializer(StrictSerializer):
    q = serializers.FloatField()

    def validate_q(self, value):
        if value <= 4:
            raise serializers.ValidationError("q deve ser maior que 4.")
        return value


class StepSectionSerializer(StrictSerializer):
    dt               = serializers.CharField()
    scheme           = serializers.ChoiceField(choices=Scheme.values)
    conservation_fix = serializers.BooleanField()

    def validate_dt(self, value: str):
        text = value.strip().lower()
        if text == "auto":
            return None
        try:
            dt = float(text)
        except ValueError:
            raise serializers.ValidationError("Use 'auto' ou um número positivo.")
        if dt <= 0:
            raise serializers.ValidationError("dt deve ser positivo.")
        return dt


class TorusSectionSerializer(StrictSerializer):
    cells = serializers.IntegerField(min_value=0)

    def validate_cells(self, value):
        if value and value < MIN_TORUS_CELLS:
            raise serializers.ValidationError(f"Use 0 (homogêneo) ou ao menos {MIN_TORUS_CELLS} células.")
        return value


class ScenarioSectionSerializer(StrictSerializer):
    name         = serializers.ChoiceField(choices=SCENARIOS)
    amplitude    = serializers.FloatField(min_value=0.0)
    wave_number  = serializers.IntegerField(min_value=1)
    bulk_x       = FloatListField(required=False)
    temperatures = FloatListField(required=False)
    match_moments = serializers.BooleanField()


class RunSectionSerializer(StrictSerializer):
    t_end        = serializers.FloatField(min_value=0.0)
    sample_every = serializers.IntegerField(min_value=1)
    output_dir   = serializers.CharField(allow_blank=True)
    workers      = serializers.IntegerField(min_value=1)
    seed         = serializers.IntegerField(min_value=0)
    plots        = serializers.BooleanField()
    fit_field    = serializers.CharField()
    fit_start    = serializers.FloatField(min_value=0.0, max_value=1.0)


class VerifySectionSerializer(StrictSerializer):
    draws           = serializers.IntegerField(min_value=10)
    refine_points   = IntListField()
    steps           = serializers.IntegerField(min_value=1)
    samples         = serializers.IntegerField(min_value=1)
    carleman_points = serializers.IntegerField(min_value=1)
    carleman_grid   = serializers.IntegerField(min_value=8)
    carleman_tol    = serializers.FloatField(min_value=0.0)
    equilibrium_tol = serializers.FloatField(min_value=0.0)

    def validate_refine_points(self, value):
        if len(value) != 2 or value[0] >= value[1]:
            raise serializers.ValidationError("Informe duas resoluções crescentes, p.ex. 16,32.")
        if any(p < 8 or p % 2 for p in value):
            raise serializers.ValidationError("Resoluções devem ser pares e >= 8.")
        return value


class RunConfigSerializer(StrictSerializer):
    species  = SpeciesSectionSerializer()
    kernel   = KernelSectionSerializer()
    grid     = GridSectionSerializer()
    sphere   = SphereSectionSerializer()
    weight   = WeightSectionSerializer()
    step     = StepSectionSerializer()
    torus    = TorusSectionSerializer()
    scenario = ScenarioSectionSerializer()
    run      = RunSectionSerializer()
    verify   = VerifySectionSerializer()

    def validate(self, attrs):
        n = len(attrs["species"]["masses"])
        errors: dict[str, list[str]] = {}

        c_phi = attrs["kernel"]["c_phi"]
        if len(c_phi) not in (1, n * n):
            errors["kernel.c_phi"] = [f"Informe 1 ou {n * n} valores (matriz {n}×{n} por linhas)."]
        else:
            try:
                build_kernel_spec(attrs["kernel"], n)
            except InvalidParameterError as exc:
                errors["kernel.c_phi"] = [str(exc)]

        scenario = attrs["scenario"]
        if scenario["name"] == "standing_wave" and not attrs["torus"]["cells"]:
            errors["torus.cells"] = ["O cenário standing_wave exige o toro (cells >= 8)."]
        if scenario["name"] == "two_species_relax" and n < 2:
            errors["species.masses"] = ["two_species_relax exige ao menos duas espécies."]
        for key in ("bulk_x", "temperatures"):
            values = scenario.get(key)
            if values is not None and len(values) != n:
                errors[f"scenario.{key}"] = [f"Deve ter {n} itens (um por espécie)."]
        if scenario.get("temperatures") and any(t <= 0 for t in scenario["temperatures"]):
            errors["scenario.temperatures"] = ["Temperaturas devem ser positivas."]

        if errors:
            raise serializers.ValidationError(errors)
        return attrs


def build_kernel_spec(section: dict, n_species: int) -> KernelSpec:
    values = section["c_phi"]
    c_phi = np.full((n_species, n_species), values[0]) if len(values) == 1 else np.array(values).reshape(n_species, n_species)
    return KernelSpec(
        gamma=section["gamma"],
        c_phi=c_phi,
        angular=section["angular"],
        c_b=section["c_b"],
        collisionless=section.get("collisionless", False),
    )


# -------------------------------
# API somente leitura
# -------------------------------
class DiagnosticsSampleSerializer(serializers.ModelSerializer):
    class Meta:
        model = DiagnosticsSample
        fields = ["time", "energy", "entropy", "rel_entropy", "entropy_production", "payload"]


class SimulationRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = SimulationRun
        fields = [
            "id", "kind", "scenario", "status", "seed", "workers", "output_dir",
            "final_rel_entropy", "decay_rate", "decay_r_squared", "max_conservation_drift",
            "sweep_parameter", "sweep_value", "criado_em", "finalizado_em",
        ]


class SimulationRunDetailSerializer(SimulationRunSerializer):
    samples = DiagnosticsSampleSerializer(many=True, read_only=True)

    class Meta(SimulationRunSerializer.Meta):
        fields = SimulationRunSerializer.Meta.fields + ["config", "samples"]


class VerificationReportSerializer(serializers.ModelSerializer):
    class Meta:
        model = VerificationReport
        fields = ["id", "suite", "passed", "metrics", "report", "criado_em"]
