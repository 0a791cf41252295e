# experiments/suites.py
"""
Suítes de verificação do comando `verify`.

Cada suíte devolve um SuiteReport com as checagens (valor medido, tolerância,
aprovado) e observações apenas informativas. O relatório em texto lista todos
os valores medidos.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from collision.carleman import calibrate_carleman, decay_probe, direct_gain, gain_carleman
from collision.engine import CollisionEngine
from collision.operators import gain_terms, gamma_ops, gamma_via_full_operator, loss_rates, weak_form_residuals
from collision.state import MixtureState
from core.exceptions import DegenerateMassError
from diagnostics.functionals import (
    entropy_production,
    entropy_splitting_check,
    epsilon_quad,
    maxwellian_mass_defect,
    relative_entropy,
)
from linearized.basis import build_basis, inner, project_PL
from linearized.frequency import build_nu, frequency_envelope
from linearized.operator import apply_L, linearized_via_collision
from linearized.probes import coercivity_probe, estimate_coercivity, kernel_residuals, random_perturbation
from quadrature.grids import VelocityGrid
from quadrature.sphere import make_sphere_rule, sphere_average_exp, sphere_average_exp_exact
from solver.conservation import moment_scale, moments_of
from solver.config import Scheme, StepConfig
from solver.homogeneous import collide
from species.carleman import exponent_cancellation_batch, exponent_terms, masses_coincide
from species.collisions import (
    conservation_residuals,
    energy_split_holds,
    omega_map,
    sigma_from_omega,
    sigma_map,
)
from species.invariants import invariant_tables
from species.maxwellian import maxwellian_table
from species.params import ANGULAR_PROFILES, KernelSpec

from .config import RunConfig
from .scenarios import match_moments, two_species_relax

logger = logging.getLogger(__name__)

# identidades
VELOCITY_BOX = 10.0
MASS_RANGE = (0.2, 5.0)
MIN_MASS_GAP = 0.1
MASS_PAIRS = 20
COLLISION_DRAWS = 10_000
EXP_RULE_POLAR = 32
EXP_SAMPLES = 100
EXP_MAX_ARGUMENT = 6.0
ROUNDOFF = 1e-12
# momentos de μ: acima de 16 pontos o erro é dominado pelo truncamento em L
MAXWELLIAN_REFINE = (8, 16)
# malha fina para a Gram e para o valor analítico de ν (Maxwell)
GRAM_POINTS = 32
MAXWELL_PROBES = 8
ENVELOPE_GAMMAS = (0.0, 0.5, 1.0)
# entropia
SPLITTING_STATES = 1000
BULK_SPEED = 1.5
# carleman
CARLEMAN_HALF_WIDTH = 4.0
CARLEMAN_RULE = (16, 32)
CARLEMAN_GAMMAS = (0.0, 1.0)
PROBE_SPEEDS = (1.0, 2.0, 4.0, 8.0, 16.0)
PROBE_SPREAD = 10.0
# além de |O| + R para v'_* na malha de Carleman
FAR_CENTER = 60.0


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    relation: str = "<="

    def render(self) -> str:
        flag = "PASS" if self.passed else "FALHA"
        return f"[{flag}] {self.name}: medido={self.measured:.6e} (exigido {self.relation} {self.tolerance:.3e})"


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    notes: list[tuple[str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def at_most(self, name: str, measured: float, tolerance: float) -> Check:
        measured = float(measured)
        check = Check(name, measured, float(tolerance), bool(measured <= tolerance), "<=")
        self.checks.append(check)
        log = logger.info if check.passed else logger.warning
        log("[Verify] %s", check.render())
        return check

    def at_least(self, name: str, measured: float, bound: float) -> Check:
        measured = float(measured)
        check = Check(name, measured, float(bound), bool(measured >= bound), ">=")
        self.checks.append(check)
        log = logger.info if check.passed else logger.warning
        log("[Verify] %s", check.render())
        return check

    def note(self, name: str, value) -> None:
        text = f"{value:.6e}" if isinstance(value, float) else str(value)
        self.notes.append((name, text))

    def render(self, source: str = "") -> str:
        lines = [f"Suíte: {self.suite}"]
        if source:
            lines.append(f"Configuração: {source}")
        lines.append("")
        lines += [c.render() for c in self.checks]
        if self.notes:
            lines += ["", "Medições informativas:"]
            lines += [f"  {name}: {text}" for name, text in self.notes]
        failed = sum(not c.passed for c in self.checks)
        lines += ["", f"Resultado: {'PASS' if self.passed else 'FALHA'} ({len(self.checks) - failed}/{len(self.checks)} checagens)"]
        return "\n".join(lines) + "\n"

    def metrics(self) -> list[dict]:
        return [
            {"name": c.name, "measured": c.measured, "tolerance": c.tolerance, "relation": c.relation, "passed": c.passed}
            for c in self.checks
        ]


def _unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    x = rng.standard_normal((n, 3))
    return x / np.linalg.norm(x, axis=1)[:, None]


def _mass_pairs(rng: np.random.Generator, n: int) -> np.ndarray:
    out = []
    while len(out) < n:
        m = rng.uniform(*MASS_RANGE, size=2)
        if abs(m[0] - m[1]) >= MIN_MASS_GAP:
            out.append(m)
    return np.array(out)


def _refinement_ratio(coarse: float, fine: float) -> float:
    """Razão de encolhimento; resíduos já no arredondamento contam como convergidos."""
    if fine <= ROUNDOFF:
        return np.inf
    return coarse / fine


# -------------------------------
# identities
# -------------------------------
def run_identities(config: RunConfig) -> SuiteReport:
    report = SuiteReport("identities")
    rng = config.rng()
    draws = config.section("verify")["draws"]
    per_pair = max(1, draws // MASS_PAIRS)

    worst_cancel, worst_rhs = 0.0, -np.inf
    worst_p, worst_e, worst_consistency = 0.0, 0.0, 0.0
    split_failures = 0
    for m_i, m_j in _mass_pairs(rng, MASS_PAIRS):
        v = rng.uniform(-VELOCITY_BOX, VELOCITY_BOX, (per_pair, 3))
        vs = rng.uniform(-VELOCITY_BOX, VELOCITY_BOX, (per_pair, 3))
        terms = exponent_terms(v, vs, m_i, m_j)
        lhs, rhs = exponent_cancellation_batch(v, vs, m_i, m_j)
        scale = np.maximum(np.abs(rhs), np.abs(terms).max(axis=0))
        worst_cancel = max(worst_cancel, float(np.max(np.abs(lhs - rhs) / scale)))
        worst_rhs = max(worst_rhs, float(np.max(rhs)))

        n = min(len(v), max(1, COLLISION_DRAWS // MASS_PAIRS))
        v, vs = v[:n], vs[:n]
        sigma = _unit_vectors(rng, n)
        omega = _unit_vectors(rng, n)
        for vp, vsp in (sigma_map(v, vs, m_i, m_j, sigma), omega_map(v, vs, m_i, m_j, omega)):
            dp, de = conservation_residuals(v, vs, vp, vsp, m_i, m_j)
            worst_p, worst_e = max(worst_p, float(dp.max())), max(worst_e, float(de.max()))
            split_failures += int(np.sum(~energy_split_holds(v, vp, vsp, m_i, m_j)))
        # mesma colisão nas duas parametrizações
        vp_o, vsp_o = omega_map(v, vs, m_i, m_j, omega)
        vp_s, vsp_s = sigma_map(v, vs, m_i, m_j, sigma_from_omega(v, vs, omega))
        scale_v = np.maximum(1.0, np.linalg.norm(v, axis=1) + np.linalg.norm(vs, axis=1))[:, None]
        gap = np.maximum(np.abs(vp_o - vp_s), np.abs(vsp_o - vsp_s)) / scale_v
        worst_consistency = max(worst_consistency, float(gap.max()))

    report.at_most("cancelamento.erro_relativo_max", worst_cancel, ROUNDOFF)
    report.at_most("cancelamento.rhs_max", worst_rhs, 0.0)
    report.at_most("colisao.momento_residuo_max", worst_p, ROUNDOFF)
    report.at_most("colisao.energia_residuo_max", worst_e, ROUNDOFF)
    report.at_most("colisao.sigma_omega_consistencia", worst_consistency, ROUNDOFF)
    report.at_most("colisao.divisao_energia_falhas", split_failures, 0)

    # regra esférica
    fine = make_sphere_rule(n_polar=EXP_RULE_POLAR, n_azimuth=2 * EXP_RULE_POLAR)
    report.at_most("esfera.soma_pesos", abs(fine.weights.sum() - 4.0 * np.pi) / (4.0 * np.pi), ROUNDOFF)
    report.at_most(
        "esfera.integral_abs_cos",
        abs(fine.integrate_profile(ANGULAR_PROFILES["abs_cos"]) - 2.0 * np.pi) / (2.0 * np.pi), ROUNDOFF,
    )
    report.at_most(
        "esfera.segundo_momento",
        abs(fine.integrate(lambda s: s[:, 0] ** 2) - 4.0 * np.pi / 3.0) / (4.0 * np.pi / 3.0), ROUNDOFF,
    )
    worst_exp = 0.0
    for _ in range(EXP_SAMPLES):
        k = rng.uniform(0.1, 3.0)
        x = _unit_vectors(rng, 1)[0] * rng.uniform(0.0, EXP_MAX_ARGUMENT / k)
        exact = sphere_average_exp_exact(k, x)
        worst_exp = max(worst_exp, abs(sphere_average_exp(fine, k, x) - exact) / exact)
    report.at_most("esfera.media_exponencial", worst_exp, 1e-8)

    # Jacobiano σ<->ω: ω percorre a esfera toda e cobre cada σ duas vezes
    profile = ANGULAR_PROFILES["cos_squared"]
    t = fine.cos_polar
    by_sigma = fine.integrate_profile(profile)
    by_omega = 0.5 * float(np.sum(fine.weights * profile(1.0 - 2.0 * t * t) * 4.0 * np.abs(t)))
    report.at_most("esfera.jacobiano_sigma_omega", abs(by_sigma - by_omega) / by_sigma, ROUNDOFF)

    # momentos da Maxwelliana na malha, com refinamento
    species = config.build_species()
    coarse_pts, fine_pts = MAXWELLIAN_REFINE
    errors = []
    for pts in (coarse_pts, fine_pts):
        grid = config.build_grid(pts)
        mu = maxwellian_table(species, grid.nodes)
        psi = invariant_tables(species, grid.nodes)
        got = moments_of(mu, psi, grid.cell_volume)
        densities = np.array([s.eq_density for s in species])
        expected = np.concatenate([densities, np.zeros(3), [1.5 * densities.sum()]])
        scale = np.concatenate([densities, np.full(3, 1.0), [1.5 * densities.sum()]])
        errors.append(float(np.max(np.abs(got - expected) / scale)))
        report.note(f"maxwelliana.momentos_{pts}", errors[-1])
    report.at_most("maxwelliana.momentos_malha_fina", errors[1], max(errors[0] / 4.0, ROUNDOFF))
    return report


# -------------------------------
# conservation
# -------------------------------
def smooth_test_state(config: RunConfig, grid: VelocityGrid, rng: np.random.Generator) -> MixtureState:
    """F_i = soma de duas Gaussianas com centros/larguras sorteados: mesma função em qualquer malha."""
    species = config.build_species()
    values = []
    for _ in species:
        centers = rng.uniform(-1.0, 1.0, (2, 3))
        widths = rng.uniform(0.7, 1.2, 2)
        weights = rng.uniform(0.5, 1.0, 2)
        acc = np.zeros(grid.node_count)
        for c, w, a in zip(centers, widths, weights):
            d = grid.nodes - c
            acc += a * np.exp(-np.sum(d * d, axis=1) / (2.0 * w * w))
        values.append(acc)
    return MixtureState(species=species, grid=grid, values=np.stack(values))


def run_conservation(config: RunConfig) -> SuiteReport:
    report = SuiteReport("conservation")
    verify = config.section("verify")
    coarse_pts, fine_pts = verify["refine_points"]

    residuals = {}
    for pts in (coarse_pts, fine_pts):
        engine = config.build_engine(points=pts)
        state = smooth_test_state(config, engine.grid, np.random.default_rng(config.seed))
        residuals[pts] = {
            label: abs(res) / scale if scale > 0 else 0.0
            for label, (res, scale) in weak_form_residuals(engine, state).items()
        }
        for label, value in residuals[pts].items():
            report.note(f"forma_fraca.{label}_{pts}", value)
    for label in residuals[coarse_pts]:
        ratio = _refinement_ratio(residuals[coarse_pts][label], residuals[fine_pts][label])
        report.at_least(f"refinamento.{label}_{coarse_pts}_para_{fine_pts}", ratio, 4.0)

    # deriva por passo com a correção de conservação
    engine = config.build_engine()
    table = build_nu(engine)
    cfg = config.step_config(table.max_value)
    cfg = StepConfig(dt=cfg.dt, scheme=cfg.scheme, conservation_fix=True)
    psi = invariant_tables(engine.species, engine.grid.nodes)
    values = match_moments(two_species_relax_values(config, engine.grid), engine.species, engine.grid)
    worst_drift, min_value = 0.0, float(values.min())
    for _ in range(verify["steps"]):
        before = moments_of(values, psi, engine.grid.cell_volume)
        values = collide(engine, values, cfg, psi)
        after = moments_of(values, psi, engine.grid.cell_volume)
        scale = np.maximum(moment_scale(values, psi, engine.grid.cell_volume), np.finfo(float).tiny)
        worst_drift = max(worst_drift, float(np.max(np.abs(after - before) / scale)))
        min_value = min(min_value, float(values.min()))
    report.at_most(f"solver.deriva_por_passo_{verify['steps']}_passos", worst_drift, ROUNDOFF)
    report.at_least("solver.min_F", min_value, 0.0)

    # positividade: passos isolados com dt em [1e-3, 10] na malha grossa
    rng = config.rng()
    coarse = config.build_engine(points=coarse_pts)
    fuzz_min = np.inf
    schemes = (Scheme.SEMI_IMPLICIT_LOSS, Scheme.EXPONENTIAL)
    for k in range(verify["samples"]):
        dt = float(10.0 ** rng.uniform(-3.0, 1.0))
        noisy = coarse.mu * np.exp(rng.uniform(-1.0, 1.0, coarse.mu.shape))
        out = collide(coarse, noisy, StepConfig(dt=dt, scheme=schemes[k % 2], conservation_fix=True))
        fuzz_min = min(fuzz_min, float(out.min()))
    report.at_least("solver.positividade_fuzz_min_F", fuzz_min, 0.0)
    return report


def two_species_relax_values(config: RunConfig, grid: VelocityGrid) -> np.ndarray:
    if config.n_species < 2:
        return maxwellian_table(config.build_species(), grid.nodes)
    return two_species_relax(config, grid, config.rng())


# -------------------------------
# spectral
# -------------------------------
def run_spectral(config: RunConfig) -> SuiteReport:
    report = SuiteReport("spectral")
    verify = config.section("verify")
    rng = config.rng()
    engine = config.build_engine()
    table = build_nu(engine)
    eps = epsilon_quad(engine)
    report.note("epsilon_quad", eps)

    # ν: paridade e envelope para γ em {0, 1/2, 1}
    reflected = np.stack([engine.grid.reflect(row) for row in table.total])
    report.at_most("nu.paridade", float(np.max(np.abs(reflected - table.total) / table.total)), ROUNDOFF)
    base = config.build_kernel()
    for gamma in ENVELOPE_GAMMAS:
        kernel = KernelSpec(gamma=gamma, c_phi=base.c_phi, angular=base.angular, c_b=base.c_b)
        probe = config.build_engine(kernel=kernel)
        env = frequency_envelope(build_nu(probe), probe.grid, gamma)
        report.at_least(f"nu.envelope_inferior_gamma_{gamma:g}", float(env.lower.min()), np.finfo(float).tiny)
        report.note(f"nu.envelope_gamma_{gamma:g}", f"[{env.lower.min():.4e}, {env.upper.max():.4e}], beta={env.beta:.4f}")

    # núcleo de Maxwell (γ = 0): ν_i = Σ_j C^Φ_ij A_b n_j, em poucos nós da malha fina
    maxwell = KernelSpec(gamma=0.0, c_phi=base.c_phi, angular=base.angular, c_b=base.c_b)
    fine = config.build_engine(points=GRAM_POINTS, kernel=maxwell)
    picks = rng.choice(fine.grid.node_count, size=MAXWELL_PROBES, replace=False)
    points = fine.grid.nodes[picks]
    densities = np.array([s.eq_density for s in fine.species])
    worst = 0.0
    for i in range(fine.n_species):
        for j in range(fine.n_species):
            expected = maxwell.c_phi[i, j] * fine.angular_mass(i, j) * densities[j]
            got = fine.rate(i, j, fine.mu[j], points=points)
            worst = max(worst, float(np.max(np.abs(got - expected) / expected)))
    report.at_most(f"nu.maxwell_analitico_{GRAM_POINTS}", worst, 1e-6)
    report.note(f"maxwelliana.defeito_massa_{GRAM_POINTS}", maxwellian_mass_defect(fine))

    # base do núcleo e P_L
    gram_basis = build_basis(engine.species, config.build_grid(GRAM_POINTS))
    report.at_most(
        f"base.gram_identidade_{GRAM_POINTS}",
        float(np.max(np.abs(gram_basis.gram - np.eye(gram_basis.size)))), 1e-6,
    )
    basis = build_basis(engine.species, engine.grid)
    pert = random_perturbation(engine, rng)
    macro, micro = project_PL(pert, basis)
    macro2, _ = project_PL(pert.with_values(macro), basis)
    norm = np.sqrt(inner(pert.values, pert.values, engine.grid.cell_volume))
    report.at_most("projecao.idempotencia", float(np.max(np.abs(macro2 - macro))) / np.max(np.abs(macro)), 1e-10)
    other = random_perturbation(engine, rng)
    macro_other, _ = project_PL(other, basis)
    dv = engine.grid.cell_volume
    sym = abs(inner(macro, other.values, dv) - inner(pert.values, macro_other, dv))
    report.at_most("projecao.simetria", sym / (norm * np.sqrt(inner(other.values, other.values, dv))), 1e-10)

    # L: duas rotas, núcleo e sinal
    lf = apply_L(engine, pert, table)
    lf_alt = linearized_via_collision(engine, pert)
    report.at_most("L.duas_rotas", float(np.max(np.abs(lf - lf_alt)) / np.max(np.abs(lf))), 1e-8)
    gamma_a = gamma_ops(engine, pert)
    gamma_b = gamma_via_full_operator(engine, pert)
    scale = max(float(np.max(np.abs(gamma_a.gain))), float(np.max(np.abs(gamma_a.loss))))
    gap = max(float(np.max(np.abs(gamma_a.gain - gamma_b.gain))), float(np.max(np.abs(gamma_a.loss - gamma_b.loss))))
    report.at_most("Gamma.duas_rotas", gap / scale, 1e-10)

    residuals = kernel_residuals(engine, basis, table)
    for k in range(basis.size):
        report.note(f"L.nucleo_phi_{k + 1}", float(residuals[k]))
    report.at_most("L.nucleo_max", float(residuals.max()), 10.0 * eps)

    worst_dirichlet = -np.inf
    for _ in range(verify["samples"]):
        dirichlet, _ = coercivity_probe(engine, random_perturbation(engine, rng), basis, table)
        worst_dirichlet = max(worst_dirichlet, dirichlet)
    report.at_most("L.dirichlet_max", worst_dirichlet, eps)
    estimate = estimate_coercivity(engine, basis, rng, samples=verify["samples"], table=table)
    report.at_most("L.dirichlet_micro_max", estimate.max_dirichlet, 0.0)
    report.note("L.lambda_hat", estimate.lambda_hat)
    return report


# -------------------------------
# entropy
# -------------------------------
def run_entropy(config: RunConfig) -> SuiteReport:
    report = SuiteReport("entropy")
    verify = config.section("verify")
    rng = config.rng()
    engine = config.build_engine()
    eps = epsilon_quad(engine)
    report.note("epsilon_quad", eps)

    worst = -np.inf
    for _ in range(verify["samples"]):
        values = engine.mu * rng.uniform(0.5, 1.5, engine.mu.shape)
        state = MixtureState(species=engine.species, grid=engine.grid, values=values)
        worst = max(worst, entropy_production(engine, state))
    report.at_most("D.estados_aleatorios_max", worst, eps)

    bulk = two_species_relax_values(config.with_overrides({"scenario.amplitude": repr(BULK_SPEED / 3.0)}), engine.grid)
    state = MixtureState(species=engine.species, grid=engine.grid, values=bulk)
    production = entropy_production(engine, state)
    report.at_most("D.bi_maxwelliana", production, -10.0 * eps)

    # Q(μ, μ) nó a nó pelo caminho do solver; μ analítica fora da malha fica só no relatório
    bulk_nodes = engine.mu.max(axis=0) >= 1e-3 * engine.mu.max()
    loss = engine.mu * loss_rates(engine, engine.mu)
    gain = gain_terms(engine, engine.mu)
    worst_solver = float(np.max(np.abs(gain - loss)[:, bulk_nodes] / loss[:, bulk_nodes]))
    worst_analytic = 0.0
    for i in range(engine.n_species):
        gain_exact = sum(
            engine.gain(i, j, engine.maxwellian_field(i), engine.maxwellian_field(j)) for j in range(engine.n_species)
        )
        worst_analytic = max(worst_analytic, float(np.max(np.abs(gain_exact - loss[i])[bulk_nodes] / loss[i][bulk_nodes])))
    report.at_most("Q_mu_mu.no_a_no", worst_solver, verify["equilibrium_tol"])
    report.note("Q_mu_mu.no_a_no_analitico", worst_analytic)

    # desigualdade de separação em estados aleatórios com os momentos de μ (alguns longe do equilíbrio)
    worst_gap, worst_forms, invalid = -np.inf, 0.0, 0
    for _ in range(SPLITTING_STATES):
        amplitude = rng.uniform(0.0, 3.0)
        values = engine.mu * np.exp(amplitude * rng.standard_normal(engine.mu.shape))
        values = match_moments(values, engine.species, engine.grid)
        if not np.all(np.isfinite(values)):
            invalid += 1
            continue
        state = MixtureState(species=engine.species, grid=engine.grid, values=values)
        lhs, rhs = entropy_splitting_check(state)
        worst_gap = max(worst_gap, lhs - rhs)
        worst_forms = max(worst_forms, abs(relative_entropy(state) - rhs) / max(rhs, np.finfo(float).tiny))
    report.at_most("separacao.lhs_menos_rhs_max", worst_gap, eps)
    report.at_most("separacao.estados_invalidos", invalid, 0)
    report.note("separacao.formas_entropia_relativa_gap", worst_forms)
    return report


# -------------------------------
# carleman
# -------------------------------
def _gaussian(center, spread: float):
    center = np.asarray(center, dtype=float)

    def field(x: np.ndarray) -> np.ndarray:
        d = np.asarray(x, dtype=float) - center
        return np.exp(-np.einsum("...k,...k->...", d, d) / spread)

    return field


def _bump(center, radius: float = 1.0):
    """exp(-1/(1 - s²)) com s = |x - c|/raio; zero fora da bola."""
    center = np.asarray(center, dtype=float)

    def field(x: np.ndarray) -> np.ndarray:
        d = np.asarray(x, dtype=float) - center
        s2 = np.einsum("...k,...k->...", d, d) / radius ** 2
        inside = s2 < 1.0
        return np.where(inside, np.exp(-1.0 / np.where(inside, 1.0 - s2, 1.0)), 0.0)

    return field


def run_carleman(config: RunConfig) -> SuiteReport:
    report = SuiteReport("carleman")
    verify = config.section("verify")
    species = config.build_species()
    i, j = 0, 1 if len(species) > 1 else 0
    m_i, m_j = species[i].mass, species[j].mass
    if masses_coincide(m_i, m_j):
        raise DegenerateMassError(m_i, m_j)

    rng = config.rng()
    grid = VelocityGrid(half_width=CARLEMAN_HALF_WIDTH, points_per_axis=verify["carleman_grid"])
    rule = make_sphere_rule(*CARLEMAN_RULE)
    field_i = _gaussian((0.3, -0.2, 0.1), 1.0)
    field_j = _gaussian((-0.1, 0.2, 0.0), 1.5)
    points = rng.uniform(-1.5, 1.5, (verify["carleman_points"], 3))

    for gamma in CARLEMAN_GAMMAS:
        kernel = KernelSpec.uniform(len(species), gamma=gamma, angular="cos_squared")
        engine = CollisionEngine(species, kernel, grid, rule, workers=config.workers)
        calibration = calibrate_carleman(engine, field_i, field_j, i, j)
        report.at_most(f"constante.gamma_{gamma:g}_ajuste_vs_analitica", calibration.relative_gap, verify["carleman_tol"])
        report.note(f"constante.gamma_{gamma:g}", f"ajustada={calibration.constant:.8f}, analitica={calibration.analytic:.8f}")
        worst = 0.0
        for v in points:
            direct = direct_gain(engine, field_i, field_j, i, j, v)
            carleman = gain_carleman(engine, field_i, field_j, i, j, v, calibration=calibration)
            worst = max(worst, abs(carleman - direct) / abs(direct))
        report.at_most(f"ganho.gamma_{gamma:g}_erro_relativo_max", worst, verify["carleman_tol"])

        far = _bump((FAR_CENTER, 0.0, 0.0))
        far_value = abs(gain_carleman(engine, far, field_j, i, j, points[0])) + abs(direct_gain(engine, far, field_j, i, j, points[0]))
        report.at_most(f"suporte_distante.gamma_{gamma:g}", far_value, 0.0)

    probes = decay_probe(m_i, m_j, PROBE_SPEEDS)
    values = np.array(list(probes.values()))
    for speed, value in probes.items():
        report.note(f"sonda_decaimento.v_{speed:g}", value)
    report.at_least("sonda_decaimento.finita", float(np.all(np.isfinite(values))), 1.0)
    report.at_most("sonda_decaimento.max_sobre_min", float(values.max() / values.min()), PROBE_SPREAD)
    return report


SUITES: dict[str, Callable[[RunConfig], SuiteReport]] = {
    "identities": run_identities,
    "conservation": run_conservation,
    "spectral": run_spectral,
    "entropy": run_entropy,
    "carleman": run_carleman,
}
