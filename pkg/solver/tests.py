# solver/tests.py
import numpy as np
from django.test import SimpleTestCase

from collision.engine import CollisionEngine
from collision.state import MixtureState, equilibrium_state
from core.exceptions import InvalidParameterError
from diagnostics.functionals import conserved_moments, relative_entropy
from quadrature.grids import VelocityGrid
from quadrature.sphere import make_sphere_rule
from species.invariants import invariant_tables
from species.maxwellian import shifted_maxwellian
from species.params import KernelSpec, SpeciesParams

from .config import Scheme, StepConfig, TorusConfig, default_dt
from .conservation import conservation_fix, moment_scale, moments_of
from .homogeneous import advance, march, run_homogeneous, step_homogeneous
from .torus import run_torus, step_torus, transport

SPECIES = (SpeciesParams(1.0, 1.0), SpeciesParams(2.0, 0.5))


def small_engine(**kernel):
    return CollisionEngine(
        SPECIES,
        KernelSpec.uniform(2, **kernel),
        VelocityGrid(half_width=5.0, points_per_axis=8),
        make_sphere_rule(4, 8),
    )


def counterflow(grid):
    # massa·velocidade: 1·1·0.5 - 2·0.5·0.5 = 0
    values = np.stack([
        shifted_maxwellian(SPECIES[0], grid.nodes, 1.0, np.array([0.5, 0.0, 0.0]), 1.0),
        shifted_maxwellian(SPECIES[1], grid.nodes, 0.5, np.array([-0.5, 0.0, 0.0]), 1.0),
    ])
    return MixtureState(species=SPECIES, grid=grid, values=values)


class ConfigTests(SimpleTestCase):
    def test_step_config_validation(self):
        with self.assertRaises(InvalidParameterError):
            StepConfig(dt=0.0)
        with self.assertRaises(InvalidParameterError):
            StepConfig(dt=0.1, scheme="rk4")
        self.assertEqual(StepConfig(dt=0.1).scheme, Scheme.SEMI_IMPLICIT_LOSS)

    def test_torus_and_default_dt(self):
        with self.assertRaises(InvalidParameterError):
            TorusConfig(cells=4)
        self.assertEqual(TorusConfig(cells=16).dx, 1.0 / 16)
        self.assertAlmostEqual(default_dt(4.0), 0.05)


class AdvanceTests(SimpleTestCase):
    def setUp(self):
        rng = np.random.default_rng(0)
        self.values = rng.random((2, 50))
        self.gain = rng.random((2, 50))
        self.rate = 5.0 * rng.random((2, 50))

    def test_positive_schemes_stay_positive_for_any_dt(self):
        for dt in (1e-3, 1.0, 1e3):
            for scheme in (Scheme.SEMI_IMPLICIT_LOSS, Scheme.EXPONENTIAL):
                self.assertGreaterEqual(advance(self.values, self.gain, self.rate, dt, scheme).min(), 0.0)

    def test_exponential_without_rate_is_euler(self):
        zero = np.zeros_like(self.rate)
        np.testing.assert_allclose(
            advance(self.values, self.gain, zero, 0.3, Scheme.EXPONENTIAL),
            self.values + 0.3 * self.gain,
        )

    def test_explicit_euler_can_go_negative(self):
        out = advance(self.values, np.zeros_like(self.gain), np.full_like(self.rate, 10.0), 1.0, Scheme.EXPLICIT_EULER)
        self.assertLess(out.min(), 0.0)


class ConservationFixTests(SimpleTestCase):
    def test_restores_moments_and_sign(self):
        grid = VelocityGrid(half_width=5.0, points_per_axis=8)
        psi = invariant_tables(SPECIES, grid.nodes)
        base = equilibrium_state(SPECIES, grid).values
        target = moments_of(base, psi, grid.cell_volume)
        noisy = base * (1.0 + 0.1 * np.random.default_rng(3).standard_normal(base.shape))
        noisy = np.abs(noisy)
        fixed = conservation_fix(noisy, target, psi, grid.cell_volume)
        scale = moment_scale(fixed, psi, grid.cell_volume)
        self.assertLess(np.max(np.abs(moments_of(fixed, psi, grid.cell_volume) - target) / scale), 1e-12)
        self.assertGreaterEqual(fixed.min(), 0.0)


class HomogeneousStepTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.engine = small_engine()
        cls.initial = counterflow(cls.engine.grid)

    def test_relaxation_conserves_and_stays_positive(self):
        cfg = StepConfig(dt=0.5)
        state = self.initial
        before = conserved_moments(state).as_vector()
        for _ in range(3):
            state = step_homogeneous(self.engine, state, cfg)
        after = conserved_moments(state).as_vector()
        self.assertLess(np.max(np.abs(after - before)), 1e-12 * np.max(np.abs(before)))
        self.assertGreaterEqual(state.values.min(), 0.0)
        self.assertLess(relative_entropy(state), relative_entropy(self.initial))

    def test_large_dt_keeps_positivity(self):
        for scheme in (Scheme.SEMI_IMPLICIT_LOSS, Scheme.EXPONENTIAL):
            state = step_homogeneous(self.engine, self.initial, StepConfig(dt=50.0, scheme=scheme))
            self.assertGreaterEqual(state.values.min(), 0.0)

    def test_explicit_euler_with_large_dt_is_not_positive(self):
        cfg = StepConfig(dt=100.0, scheme=Scheme.EXPLICIT_EULER, conservation_fix=False)
        self.assertLess(step_homogeneous(self.engine, self.initial, cfg).values.min(), 0.0)

    def test_rejects_spatial_state(self):
        spatial = equilibrium_state(SPECIES, self.engine.grid, cells=8)
        with self.assertRaises(ValueError):
            step_homogeneous(self.engine, spatial, StepConfig(dt=0.1))


class MarchTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.engine = small_engine()
        cls.initial = counterflow(cls.engine.grid)

    def test_zero_time_gives_single_record(self):
        records = march(self.engine, self.initial, StepConfig(dt=0.1), 0.0, 1, step_homogeneous)
        self.assertEqual(len(records), 1)
        self.assertEqual(records[0].time, 0.0)

    def test_uniform_steps_land_on_t_end(self):
        seen = []
        records = march(
            self.engine, self.initial, StepConfig(dt=0.2), 0.3, 1, step_homogeneous,
            on_state=lambda n, t, s: seen.append(n),
        )
        np.testing.assert_allclose([r.time for r in records], [0.0, 0.15, 0.3])
        self.assertEqual(seen, [0, 1, 2])

    def test_sampling_keeps_final_state(self):
        records = march(self.engine, self.initial, StepConfig(dt=0.1), 0.3, 2, step_homogeneous)
        np.testing.assert_allclose([r.time for r in records], [0.0, 0.2, 0.3])

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            march(self.engine, self.initial, StepConfig(dt=0.1), -1.0, 1, step_homogeneous)
        with self.assertRaises(ValueError):
            march(self.engine, self.initial, StepConfig(dt=0.1), 1.0, 0, step_homogeneous)


class TorusTests(SimpleTestCase):
    def test_transport_by_one_cell_is_a_roll(self):
        values = np.random.default_rng(1).random((8, 2, 3))
        vx = np.array([1.0, -1.0, 0.0])
        out = transport(values, vx, 1.0 / 8)
        np.testing.assert_array_equal(out[:, :, 0], np.roll(values[:, :, 0], 1, axis=0))
        np.testing.assert_array_equal(out[:, :, 1], np.roll(values[:, :, 1], -1, axis=0))
        np.testing.assert_array_equal(out[:, :, 2], values[:, :, 2])

    def test_fractional_transport_conserves_slices(self):
        values = np.random.default_rng(2).random((10, 2, 4))
        vx = np.array([0.37, -1.9, 2.25, 0.0])
        out = transport(values, vx, 0.13)
        np.testing.assert_allclose(out.sum(axis=0), values.sum(axis=0), rtol=1e-13)
        self.assertGreaterEqual(out.min(), 0.0)

    def test_collisionless_step_conserves_mass(self):
        engine = small_engine(c_phi=0.0, collisionless=True)
        grid = engine.grid
        x = (np.arange(8) + 0.5) / 8
        base = equilibrium_state(SPECIES, grid).values
        values = (1.0 + 0.2 * np.cos(2.0 * np.pi * x))[:, None, None] * base[None]
        state = MixtureState(species=SPECIES, grid=grid, values=values)
        after = step_torus(engine, state, StepConfig(dt=0.1), TorusConfig(cells=8))
        np.testing.assert_allclose(conserved_moments(after).mass, conserved_moments(state).mass, rtol=1e-13)
        self.assertGreaterEqual(after.values.min(), 0.0)

    def test_uniform_state_is_invariant_under_transport(self):
        engine = small_engine(c_phi=0.0, collisionless=True)
        state = equilibrium_state(SPECIES, engine.grid, cells=8)
        after = step_torus(engine, state, StepConfig(dt=0.37))
        np.testing.assert_allclose(after.values, state.values, rtol=1e-13)

    def test_cell_count_mismatch(self):
        engine = small_engine()
        state = equilibrium_state(SPECIES, engine.grid, cells=8)
        with self.assertRaises(ValueError):
            step_torus(engine, state, StepConfig(dt=0.1), TorusConfig(cells=16))
        with self.assertRaises(ValueError):
            step_torus(engine, equilibrium_state(SPECIES, engine.grid), StepConfig(dt=0.1))


class RunTests(SimpleTestCase):
    def test_run_homogeneous_conserves_mass(self):
        engine = small_engine()
        initial = counterflow(engine.grid)
        records = run_homogeneous(engine, initial, StepConfig(dt=0.1), 0.2)
        self.assertEqual(len(records), 3)
        np.testing.assert_allclose(records[-1].mass, records[0].mass, rtol=1e-12)
        self.assertLess(records[-1].rel_entropy, records[0].rel_entropy)

    def test_run_torus_keeps_equilibrium(self):
        engine = small_engine()
        state = equilibrium_state(SPECIES, engine.grid, cells=8)
        records = run_torus(engine, state, StepConfig(dt=0.05), TorusConfig(cells=8), 0.1, sample_every=2)
        self.assertEqual([r.time for r in records], [0.0, 0.1])
        self.assertLess(abs(records[-1].rel_entropy), 1e-10)
        np.testing.assert_allclose(records[-1].mass, records[0].mass, rtol=1e-12)

    def test_maxwellian_is_a_fixed_point_of_one_step(self):
        engine = small_engine(gamma=0.5)
        mu = equilibrium_state(SPECIES, engine.grid)
        for scheme in (Scheme.SEMI_IMPLICIT_LOSS, Scheme.EXPONENTIAL, Scheme.EXPLICIT_EULER):
            after = step_homogeneous(engine, mu, StepConfig(dt=0.2, scheme=scheme, conservation_fix=False))
            np.testing.assert_allclose(after.values, mu.values, rtol=1e-12, atol=0.0)

    def test_uniform_torus_step_matches_homogeneous_step(self):
        engine = small_engine()
        homogeneous = counterflow(engine.grid)
        spatial = MixtureState(
            species=SPECIES, grid=engine.grid,
            values=np.broadcast_to(homogeneous.values, (8,) + homogeneous.values.shape).copy(),
        )
        cfg = StepConfig(dt=0.2, conservation_fix=False)
        expected = step_homogeneous(engine, homogeneous, cfg).values
        after = step_torus(engine, spatial, cfg, TorusConfig(cells=8))
        for c in range(8):
            np.testing.assert_allclose(after.values[c], expected, rtol=1e-12, atol=1e-14 * expected.max())
