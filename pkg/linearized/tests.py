# linearized/tests.py
import numpy as np
from django.test import SimpleTestCase

from collision.engine import CollisionEngine
from collision.state import MixtureState, StateMode, equilibrium_state
from core.exceptions import ModeError
from diagnostics.functionals import epsilon_quad
from quadrature.grids import VelocityGrid
from quadrature.sphere import make_sphere_rule
from species.params import KernelSpec, SpeciesParams, WeightSpec

from .basis import build_basis, inner, macro_coefficients, project_PL
from .frequency import build_nu, frequency_envelope
from .operator import apply_L, linearized_via_collision
from .probes import coercivity_probe, estimate_coercivity, kernel_residuals, random_perturbation, weighted_k_bound

SPECIES = (SpeciesParams(1.0, 1.0), SpeciesParams(2.0, 0.5))


def engine_for(grid, gamma=0.0):
    return CollisionEngine(SPECIES, KernelSpec.uniform(2, gamma=gamma), grid, make_sphere_rule(4, 8))


class FrequencyTests(SimpleTestCase):
    def test_maxwell_kernel_frequency_is_flat(self):
        engine = engine_for(VelocityGrid(half_width=6.0, points_per_axis=12))
        table = build_nu(engine)
        # γ = 0, b = |cosθ|: ν_ij = 2π n_j
        for i, j in engine.pairs():
            np.testing.assert_allclose(table.pairwise[i, j], 2.0 * np.pi * SPECIES[j].eq_density, rtol=1e-3)
        np.testing.assert_allclose(table.total, table.pairwise.sum(axis=1))
        self.assertAlmostEqual(table.max_value, float(table.total.max()))

        envelope = frequency_envelope(table, engine.grid, 0.0)
        np.testing.assert_allclose(envelope.lower, envelope.upper, rtol=1e-12)
        self.assertAlmostEqual(envelope.beta, 1.5 / 0.5, delta=1e-2)

    def test_hard_potential_frequency_grows(self):
        engine = engine_for(VelocityGrid(half_width=5.0, points_per_axis=8), gamma=1.0)
        table = build_nu(engine)
        speeds = engine.grid.speeds
        slow, fast = np.argmin(speeds), np.argmax(speeds)
        self.assertGreater(table.total[0, fast], table.total[0, slow])


class BasisTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.grid = VelocityGrid(half_width=8.0, points_per_axis=32)
        cls.basis = build_basis(SPECIES, cls.grid)

    def test_basis_is_orthonormal_on_fine_grid(self):
        self.assertEqual(self.basis.size, 6)
        np.testing.assert_allclose(self.basis.gram, np.eye(6), atol=1e-8)

    def test_projection_is_idempotent(self):
        rng = np.random.default_rng(4)
        values = rng.standard_normal((2, self.grid.node_count)) * np.exp(-0.1 * self.grid.speeds ** 2)
        pert = MixtureState(species=SPECIES, grid=self.grid, values=values, mode=StateMode.PERTURBATION)
        macro, micro = project_PL(pert, self.basis)
        np.testing.assert_allclose(macro + micro, values)
        again, rest = project_PL(pert.with_values(macro), self.basis)
        scale = np.abs(macro).max()
        self.assertLess(np.abs(again - macro).max() / scale, 1e-10)
        self.assertLess(np.abs(macro_coefficients(micro, self.basis)).max(), 1e-10 * scale)
        for k in range(self.basis.size):
            self.assertLess(abs(inner(micro, self.basis.vectors[k], self.grid.cell_volume)), 1e-10)

    def test_projection_requires_perturbation(self):
        with self.assertRaises(ModeError):
            project_PL(equilibrium_state(SPECIES, self.grid), self.basis)


class LinearizedOperatorTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.engine = engine_for(VelocityGrid(half_width=5.0, points_per_axis=8), gamma=0.5)
        cls.table = build_nu(cls.engine)
        cls.basis = build_basis(SPECIES, cls.engine.grid)

    def test_two_routes_agree(self):
        pert = random_perturbation(self.engine, np.random.default_rng(9))
        direct = apply_L(self.engine, pert, self.table)
        via_q = linearized_via_collision(self.engine, pert)
        self.assertLess(np.abs(direct - via_q).max() / np.abs(direct).max(), 1e-10)

    def test_micro_perturbation_has_no_macro_part(self):
        pert = random_perturbation(self.engine, np.random.default_rng(2), micro_only=True, basis=self.basis)
        coeffs = macro_coefficients(pert.values, self.basis)
        self.assertLess(np.abs(coeffs).max(), 1e-10 * np.abs(pert.values).max())

    def test_kernel_directions_are_annihilated(self):
        residuals = kernel_residuals(self.engine, self.basis, self.table)
        self.assertEqual(residuals.shape, (6,))
        self.assertLessEqual(residuals.max(), 10.0 * epsilon_quad(self.engine))

    def test_dirichlet_form_is_nonpositive(self):
        eps = epsilon_quad(self.engine)
        rng = np.random.default_rng(12)
        for _ in range(2):
            dirichlet, _ = coercivity_probe(self.engine, random_perturbation(self.engine, rng), self.basis, self.table)
            self.assertLessEqual(dirichlet, eps)

        estimate = estimate_coercivity(self.engine, self.basis, np.random.default_rng(1), samples=2, table=self.table)
        self.assertEqual(estimate.samples, 2)
        self.assertLess(estimate.max_dirichlet, 0.0)
        self.assertGreater(estimate.lambda_hat, 0.0)

    def test_weighted_k_bound_is_positive(self):
        bound = weighted_k_bound(self.engine, WeightSpec(q=5.0))
        self.assertEqual(bound.shape, (2,))
        self.assertTrue(np.all(bound > 0))

    def test_operator_rejects_physical_state(self):
        with self.assertRaises(ModeError):
            apply_L(self.engine, equilibrium_state(SPECIES, self.engine.grid), self.table)
