# collision/tests.py
import numpy as np
from django.test import SimpleTestCase, override_settings

from core.exceptions import DegenerateMassError, GridMismatchError, ModeError
from quadrature.grids import VelocityGrid
from quadrature.sphere import make_sphere_rule
from species.carleman import carleman_constant
from species.params import KernelSpec, SpeciesParams

from .carleman import calibrate_carleman, decay_probe, direct_gain, gain_carleman
from .engine import CollisionEngine
from .operators import (
    collision_tally,
    gamma_ops,
    gamma_via_full_operator,
    nonlinear_frequency,
    q_gain,
    q_loss,
    weak_form_residual,
    weak_form_residuals,
)
from .state import MixtureState, StateMode, equilibrium_state, zero_perturbation

SPECIES = (SpeciesParams(1.0, 1.0), SpeciesParams(2.0, 0.5))


def small_engine(gamma=0.0, workers=1, angular="abs_cos"):
    return CollisionEngine(
        SPECIES,
        KernelSpec.uniform(2, gamma=gamma, angular=angular),
        VelocityGrid(half_width=5.0, points_per_axis=8),
        make_sphere_rule(4, 8),
        workers=workers,
    )


def gaussian(center, spread):
    center = np.asarray(center, dtype=float)
    return lambda x: np.exp(-np.sum((np.asarray(x) - center) ** 2, axis=-1) / spread)


def bump(center):
    center = np.asarray(center, dtype=float)

    def field(x):
        s2 = np.sum((np.asarray(x) - center) ** 2, axis=-1)
        inside = s2 < 1.0
        return np.where(inside, np.exp(-1.0 / np.where(inside, 1.0 - s2, 1.0)), 0.0)

    return field


class MixtureStateTests(SimpleTestCase):
    def test_shape_and_mode_checks(self):
        grid = VelocityGrid(half_width=5.0, points_per_axis=8)
        with self.assertRaises(GridMismatchError):
            MixtureState(species=SPECIES, grid=grid, values=np.ones((3, grid.node_count)))
        with self.assertRaises(GridMismatchError):
            MixtureState(species=SPECIES, grid=grid, values=np.ones((2, 10)))
        state = MixtureState(species=SPECIES, grid=grid, values=-np.ones((2, grid.node_count)))
        with self.assertRaises(ModeError):
            state.require_physical()
        pert = zero_perturbation(SPECIES, grid)
        with self.assertRaises(ModeError):
            pert.require_physical()
        with self.assertRaises(ModeError):
            equilibrium_state(SPECIES, grid).require_perturbation()

    def test_spatial_cells(self):
        grid = VelocityGrid(half_width=5.0, points_per_axis=8)
        state = equilibrium_state(SPECIES, grid, cells=4)
        self.assertTrue(state.spatial)
        self.assertEqual(state.cells, 4)
        self.assertFalse(state.cell(2).spatial)


class OperatorTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.engine = small_engine()
        cls.state = equilibrium_state(SPECIES, cls.engine.grid)

    def test_maxwellian_pair_balances_with_analytic_fields(self):
        engine = self.engine
        for i, j in engine.pairs():
            gain = engine.gain(i, j, engine.maxwellian_field(i), engine.maxwellian_field(j))
            loss = engine.mu[i] * engine.rate(i, j, engine.mu[j])
            np.testing.assert_allclose(gain, loss, rtol=1e-11)

    def test_maxwellian_gain_balances_loss_on_fine_grid(self):
        engine = CollisionEngine(
            SPECIES, KernelSpec.uniform(2, gamma=0.0),
            VelocityGrid(half_width=6.0, points_per_axis=24), make_sphere_rule(4, 8),
        )
        state = equilibrium_state(SPECIES, engine.grid)
        speeds = engine.grid.speeds
        nodes = [int(np.argmin(speeds)), int(np.argmin(np.abs(speeds - 2.0))), int(np.argmax(speeds))]
        for node in nodes:
            for i, j in engine.pairs():
                gain = q_gain(engine, state, i, j, v_node=node)
                loss = q_loss(engine, state, i, j, v_node=node)
                self.assertLess(abs(gain - loss) / loss, 1e-3)
                self.assertAlmostEqual(gain / loss, 1.0, places=10)

    def test_physical_field_is_exact_for_scaled_maxwellians(self):
        points = np.random.default_rng(4).uniform(-8.0, 8.0, (50, 3))
        field = self.engine.physical_field(1, 3.0 * self.engine.mu[1])
        np.testing.assert_allclose(field(points), 3.0 * self.engine.maxwellian_field(1)(points), rtol=1e-12)

    def test_perturbation_field_is_exact_for_invariants(self):
        engine = self.engine
        nodes = engine.grid.nodes
        phi = 1.0 + nodes[:, 0] - 0.5 * nodes[:, 2] + 0.25 * np.sum(nodes ** 2, axis=1)
        points = np.random.default_rng(6).uniform(-6.0, 6.0, (50, 3))
        expected = engine.sqrt_maxwellian_field(0)(points) * (
            1.0 + points[:, 0] - 0.5 * points[:, 2] + 0.25 * np.sum(points ** 2, axis=1)
        )
        np.testing.assert_allclose(engine.perturbation_field(0, engine.sqrt_mu[0] * phi)(points), expected, rtol=1e-9, atol=1e-14)

    def test_node_values_match_full_arrays(self):
        node = 200
        full = q_loss(self.engine, self.state, 0, 1)
        self.assertAlmostEqual(q_loss(self.engine, self.state, 0, 1, v_node=node), full[node], places=13)
        gain = q_gain(self.engine, self.state, 1, 0)
        self.assertAlmostEqual(q_gain(self.engine, self.state, 1, 0, v_node=node), gain[node], places=13)
        rate = nonlinear_frequency(self.engine, self.state, 0)
        self.assertAlmostEqual(q_loss(self.engine, self.state, 0, 0, v_node=node) + q_loss(self.engine, self.state, 0, 1, v_node=node),
                               self.state.values[0, node] * rate[node], places=13)

    def test_maxwell_kernel_rate_is_constant(self):
        # γ = 0: ∬ B μ_j = C^Φ · 2π · (massa de μ_j na malha) em qualquer v
        rate = self.engine.rate(0, 1, self.engine.mu[1])
        grid_mass = self.engine.mu[1].sum() * self.engine.grid.cell_volume
        np.testing.assert_allclose(rate, 2.0 * np.pi * grid_mass, rtol=1e-12)

    def test_operators_reject_wrong_mode(self):
        pert = zero_perturbation(SPECIES, self.engine.grid)
        with self.assertRaises(ModeError):
            q_loss(self.engine, pert, 0, 0)
        with self.assertRaises(ModeError):
            gamma_ops(self.engine, self.state)

    def test_weak_form_labels(self):
        residuals = weak_form_residuals(self.engine, self.state)
        self.assertEqual(list(residuals), ["mass_1", "mass_2", "px", "py", "pz", "energy"])
        for residual, scale in residuals.values():
            self.assertGreater(scale, 0.0)
        self.assertAlmostEqual(weak_form_residual(self.engine, self.state, "mass:2"), residuals["mass_2"][0], places=14)

    def test_tally_is_nonnegative(self):
        tally = collision_tally(self.engine, self.state)
        self.assertGreaterEqual(tally.gain.min(), 0.0)
        self.assertGreaterEqual(tally.loss.min(), 0.0)

    def test_gamma_two_routes_agree(self):
        rng = np.random.default_rng(5)
        pert = MixtureState(
            species=SPECIES, grid=self.engine.grid,
            values=rng.standard_normal((2, self.engine.grid.node_count)) * self.engine.sqrt_mu ** 0.5,
            mode=StateMode.PERTURBATION,
        )
        a = gamma_ops(self.engine, pert)
        b = gamma_via_full_operator(self.engine, pert)
        self.assertLess(np.max(np.abs(a.gain - b.gain)) / np.max(np.abs(a.gain)), 1e-10)
        self.assertLess(np.max(np.abs(a.loss - b.loss)) / np.max(np.abs(a.loss)), 1e-10)

    @override_settings(KINETIC_CHUNK_ELEMENTS=50_000)
    def test_results_do_not_depend_on_workers(self):
        field_0 = self.engine.physical_field(0, self.engine.mu[0])
        field_1 = self.engine.physical_field(1, self.engine.mu[1])
        serial = small_engine(gamma=0.5, workers=1).gain(0, 1, field_0, field_1)
        threaded = small_engine(gamma=0.5, workers=3).gain(0, 1, field_0, field_1)
        np.testing.assert_array_equal(serial, threaded)


class CarlemanGainTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.engine = CollisionEngine(
            SPECIES,
            KernelSpec.uniform(2, gamma=0.0, angular="cos_squared"),
            VelocityGrid(half_width=4.0, points_per_axis=32),
            make_sphere_rule(16, 32),
        )
        cls.f_i = staticmethod(gaussian((0.3, -0.2, 0.1), 1.0))
        cls.f_j = staticmethod(gaussian((-0.1, 0.2, 0.0), 1.5))

    def test_calibrated_constant_is_close_to_closed_form(self):
        calibration = calibrate_carleman(self.engine, self.f_i, self.f_j, 0, 1)
        self.assertEqual(calibration.analytic, carleman_constant(1.0, 2.0))
        self.assertLess(calibration.relative_gap, 0.15)

    def test_calibrated_gain_matches_direct_gain(self):
        calibration = calibrate_carleman(self.engine, self.f_i, self.f_j, 0, 1)
        v = np.array([0.5, -0.25, 0.25])
        direct = direct_gain(self.engine, self.f_i, self.f_j, 0, 1, v)
        carleman = gain_carleman(self.engine, self.f_i, self.f_j, 0, 1, v, calibration=calibration)
        self.assertLess(abs(carleman - direct) / direct, 5e-2)

    def test_far_support_gives_zero(self):
        far = bump((60.0, 0.0, 0.0))
        self.assertEqual(gain_carleman(self.engine, far, self.f_j, 0, 1, np.zeros(3)), 0.0)
        self.assertEqual(direct_gain(self.engine, far, self.f_j, 0, 1, np.zeros(3)), 0.0)

    def test_equal_masses_are_rejected(self):
        engine = CollisionEngine(
            (SpeciesParams(1.0), SpeciesParams(1.0)),
            KernelSpec.uniform(2),
            VelocityGrid(half_width=4.0, points_per_axis=8),
            make_sphere_rule(4, 8),
        )
        with self.assertRaises(DegenerateMassError) as ctx:
            calibrate_carleman(engine, self.f_i, self.f_j, 0, 1)
        self.assertIn("hiperplano", str(ctx.exception))

    def test_decay_probe_is_bounded(self):
        probes = decay_probe(1.0, 2.0)
        values = np.array(list(probes.values()))
        self.assertTrue(np.all(np.isfinite(values)))
        self.assertTrue(np.all(values > 0))
        self.assertLess(values.max() / values.min(), 10.0)
