# experiments/config.py
"""
Configuração de execução.

Arquivos de preset são arquivos dotenv com chaves pontuadas (`kernel.gamma=0.5`),
lidos com python-dotenv. A resolução é: DEFAULTS <- arquivo <- sobrescritas de
flags; o resultado é validado pelo RunConfigSerializer e gravado de volta como
`config.env` ao lado do CSV.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np
from django.conf import settings
from dotenv import dotenv_values

from collision.engine import CollisionEngine
from core.exceptions import ConfigError
from quadrature.grids import VelocityGrid
from quadrature.sphere import SphereRule, make_sphere_rule
from solver.config import StepConfig, TorusConfig, default_dt
from species.params import KernelSpec, SpeciesParams, WeightSpec

from .serializers import RunConfigSerializer, build_kernel_spec

logger = logging.getLogger(__name__)

CONFIG_FILENAME = "config.env"

DEFAULTS: dict[str, str] = {
    "species.masses": "1,2",
    "species.densities": "1,0.5",
    "kernel.gamma": "0",
    "kernel.c_phi": "1",
    "kernel.angular": "abs_cos",
    "kernel.c_b": "1",
    "kernel.collisionless": "false",
    "grid.half_width": "6",
    "grid.points": "12",
    "sphere.n_polar": "4",
    "sphere.n_azimuth": "8",
    "weight.q": "5",
    "step.dt": "auto",
    "step.scheme": "semi_implicit_loss",
    "step.conservation_fix": "true",
    "torus.cells": "0",
    "scenario.name": "two_species_relax",
    "scenario.amplitude": "0.3",
    "scenario.wave_number": "1",
    "scenario.match_moments": "true",
    "run.t_end": "2",
    "run.sample_every": "1",
    "run.output_dir": "",
    "run.workers": "1",
    "run.seed": "0",
    "run.plots": "false",
    "run.fit_field": "winf",
    "run.fit_start": "0.5",
    "verify.draws": "100000",
    "verify.refine_points": "16,32",
    "verify.steps": "50",
    "verify.samples": "8",
    "verify.carleman_points": "20",
    "verify.carleman_grid": "40",
    "verify.carleman_tol": "1e-3",
    "verify.equilibrium_tol": "1e-3",
}

# apelidos aceitos em --parameter de varreduras
SWEEP_ALIASES = {"species.mass_ratio"}


def unflatten(flat: Mapping[str, str]) -> dict[str, dict[str, str]]:
    """{'kernel.gamma': '0'} -> {'kernel': {'gamma': '0'}}; chaves sem seção viram erro."""
    nested: dict[str, dict[str, str]] = {}
    errors: dict[str, list[str]] = {}
    for key, value in flat.items():
        section, dot, name = key.partition(".")
        if not dot or not section or not name or "." in name:
            errors[key] = ["Use o formato secao.chave."]
            continue
        nested.setdefault(section, {})[name] = "" if value is None else str(value)
    if errors:
        raise ConfigError(errors)
    return nested


def flatten_errors(errors, prefix: str = "") -> dict[str, list[str]]:
    """Erros aninhados do DRF -> {caminho pontuado: [mensagens]}."""
    out: dict[str, list[str]] = {}
    if isinstance(errors, Mapping):
        for key, value in errors.items():
            if key == "non_field_errors":
                path = prefix or "config"
            else:
                path = f"{prefix}.{key}" if prefix else str(key)
            for p, msgs in flatten_errors(value, path).items():
                out.setdefault(p, []).extend(msgs)
    elif isinstance(errors, (list, tuple)):
        for item in errors:
            if isinstance(item, (Mapping, list, tuple)):
                for p, msgs in flatten_errors(item, prefix).items():
                    out.setdefault(p, []).extend(msgs)
            else:
                out.setdefault(prefix or "config", []).append(str(item))
    else:
        out.setdefault(prefix or "config", []).append(str(errors))
    return out


def resolve_preset(name_or_path: str | Path) -> Path:
    """Aceita um caminho para arquivo ou o nome de um preset em KINETIC_PRESETS_DIR."""
    path = Path(name_or_path)
    if path.is_file():
        return path
    presets = Path(settings.KINETIC_PRESETS_DIR)
    for candidate in (presets / f"{name_or_path}.env", presets / str(name_or_path)):
        if candidate.is_file():
            return candidate
    raise ConfigError({"config": [f"Arquivo ou preset não encontrado: '{name_or_path}'."]})


def read_config_file(name_or_path: str | Path) -> dict[str, str]:
    path = resolve_preset(name_or_path)
    values = dotenv_values(path)
    logger.debug("[Config] %d chaves lidas de %s", len(values), path)
    return {k: ("" if v is None else v) for k, v in values.items()}


def expand_aliases(flat: dict[str, str]) -> dict[str, str]:
    """species.mass_ratio=r -> species.masses=1,r (duas espécies)."""
    flat = dict(flat)
    ratio = flat.pop("species.mass_ratio", None)
    if ratio is not None:
        try:
            value = float(ratio)
        except ValueError:
            raise ConfigError({"species.mass_ratio": ["Informe um número."]})
        if value <= 0:
            raise ConfigError({"species.mass_ratio": ["Razão de massas deve ser positiva."]})
        flat["species.masses"] = f"1,{value!r}"
    return flat


@dataclass
class RunConfig:
    flat: dict[str, str]
    data: dict = field(repr=False)

    # ---------- Acesso ----------
    def section(self, name: str) -> dict:
        return self.data[name]

    @property
    def n_species(self) -> int:
        return len(self.data["species"]["masses"])

    @property
    def seed(self) -> int:
        return self.data["run"]["seed"]

    @property
    def workers(self) -> int:
        return self.data["run"]["workers"]

    @property
    def scenario(self) -> str:
        return self.data["scenario"]["name"]

    @property
    def spatial(self) -> bool:
        return self.data["torus"]["cells"] > 0

    # ---------- Objetos do domínio ----------
    def build_species(self) -> list[SpeciesParams]:
        sec = self.data["species"]
        return [SpeciesParams(mass=m, eq_density=n) for m, n in zip(sec["masses"], sec["densities"])]

    def build_kernel(self) -> KernelSpec:
        return build_kernel_spec(self.data["kernel"], self.n_species)

    def build_grid(self, points: int | None = None) -> VelocityGrid:
        sec = self.data["grid"]
        return VelocityGrid(half_width=sec["half_width"], points_per_axis=points or sec["points"])

    def build_rule(self) -> SphereRule:
        sec = self.data["sphere"]
        return make_sphere_rule(n_polar=sec["n_polar"], n_azimuth=sec["n_azimuth"])

    def build_weight(self) -> WeightSpec:
        return WeightSpec(q=self.data["weight"]["q"])

    def build_engine(self, points: int | None = None, kernel: KernelSpec | None = None) -> CollisionEngine:
        return CollisionEngine(
            species=self.build_species(),
            kernel=kernel or self.build_kernel(),
            grid=self.build_grid(points),
            rule=self.build_rule(),
            workers=self.workers,
        )

    def step_config(self, max_frequency: float) -> StepConfig:
        sec = self.data["step"]
        dt = sec["dt"] if sec["dt"] is not None else default_dt(max_frequency)
        return StepConfig(dt=dt, scheme=sec["scheme"], conservation_fix=sec["conservation_fix"])

    def torus_config(self) -> TorusConfig | None:
        cells = self.data["torus"]["cells"]
        return TorusConfig(cells=cells) if cells else None

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def output_dir(self, command: str) -> Path:
        custom = self.data["run"]["output_dir"]
        if custom:
            return Path(custom)
        return Path(settings.KINETIC_OUTPUT_DIR) / f"{command}-{self.scenario}"

    # ---------- Serialização ----------
    def to_env(self) -> str:
        return "".join(f"{key}={self.flat[key]}\n" for key in sorted(self.flat))

    def write(self, directory: Path) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / CONFIG_FILENAME
        path.write_text(self.to_env(), encoding="utf-8")
        return path

    def with_overrides(self, overrides: Mapping[str, str]) -> "RunConfig":
        merged = dict(self.flat)
        merged.update(expand_aliases(dict(overrides)))
        return validate_flat(merged)


def validate_flat(flat: Mapping[str, str]) -> RunConfig:
    serializer = RunConfigSerializer(data=unflatten(flat))
    if not serializer.is_valid():
        raise ConfigError(flatten_errors(serializer.errors))
    return RunConfig(flat=dict(flat), data=serializer.validated_data)


def load_config(source: str | Path | None = None, overrides: Mapping[str, str] | None = None) -> RunConfig:
    """DEFAULTS <- arquivo (caminho ou nome de preset) <- sobrescritas."""
    flat = dict(DEFAULTS)
    if source:
        flat.update(expand_aliases(read_config_file(source)))
    if overrides:
        flat.update(expand_aliases(dict(overrides)))
    config = validate_flat(flat)
    logger.info(
        "[Config] cenário=%s N=%d malha=%s³ gamma=%s",
        config.scenario, config.n_species, flat["grid.points"], flat["kernel.gamma"],
    )
    return config


def cli_overrides(options: Mapping) -> dict[str, str]:
    """Flags comuns dos comandos -> chaves pontuadas (flags vencem o arquivo)."""
    mapping = {"workers": "run.workers", "seed": "run.seed", "out": "run.output_dir"}
    out = {key: str(options[flag]) for flag, key in mapping.items() if options.get(flag) is not None}
    if options.get("plots"):
        out["run.plots"] = "true"
    return out
