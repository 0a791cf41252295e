# species/tests.py
import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DegenerateMassError, InvalidParameterError, NonUnitVectorError

from .carleman import (
    carleman_constant,
    carleman_sphere,
    exponent_cancellation,
    exponent_cancellation_batch,
    exponent_terms,
)
from .collisions import (
    conservation_residuals,
    energy_split_holds,
    omega_map,
    post_collision_omega,
    post_collision_sigma,
    sigma_from_omega,
    sigma_map,
)
from .invariants import CollisionInvariant, all_invariants, invariant_tables
from .maxwellian import maxwellian, shifted_maxwellian, velocity_weight
from .params import CollisionPair, KernelSpec, SpeciesParams, WeightSpec


def unit(rng, n):
    x = rng.standard_normal((n, 3))
    return x / np.linalg.norm(x, axis=1)[:, None]


class ParamsTests(SimpleTestCase):
    def test_species_rejects_nonpositive_values(self):
        with self.assertRaises(InvalidParameterError):
            SpeciesParams(mass=0.0)
        with self.assertRaises(InvalidParameterError):
            SpeciesParams(mass=1.0, eq_density=-1.0)

    def test_weight_exponent_must_exceed_four(self):
        with self.assertRaises(InvalidParameterError):
            WeightSpec(q=4.0)
        self.assertEqual(WeightSpec().q, 5.0)

    def test_kernel_validation(self):
        with self.assertRaises(InvalidParameterError):
            KernelSpec.uniform(2, gamma=1.5)
        with self.assertRaises(InvalidParameterError):
            KernelSpec(gamma=0.0, c_phi=[[1.0, 2.0], [1.0, 1.0]])
        with self.assertRaises(InvalidParameterError):
            KernelSpec.uniform(2, angular="desconhecido")
        # 2·max(t, 0) só cabe sob c_b|t| com c_b >= 2
        with self.assertRaises(InvalidParameterError):
            KernelSpec.uniform(2, angular="forward_cos", c_b=1.0)
        KernelSpec.uniform(2, angular="forward_cos", c_b=2.0)

    def test_kernel_is_symmetric_in_species(self):
        kernel = KernelSpec(gamma=0.5, c_phi=[[1.0, 0.7], [0.7, 2.0]], pair_angular={(0, 1): "cos_squared"})
        rng = np.random.default_rng(0)
        z = rng.standard_normal((20, 3))
        sigma = unit(rng, 20)
        np.testing.assert_array_equal(kernel.evaluate(0, 1, z, sigma), kernel.evaluate(1, 0, z, sigma))
        self.assertEqual(kernel.angular_name(1, 0), "cos_squared")
        self.assertEqual(kernel.angular_name(0, 0), "abs_cos")

    def test_collisionless_kernel_allows_zero_constants(self):
        kernel = KernelSpec.uniform(2, c_phi=0.0, collisionless=True)
        self.assertTrue(kernel.collisionless)
        with self.assertRaises(InvalidParameterError):
            KernelSpec.uniform(2, c_phi=0.0)

    def test_pair_rejects_negative_index(self):
        with self.assertRaises(InvalidParameterError):
            CollisionPair(i=-1, j=0, v=np.zeros(3), v_star=np.zeros(3))


class MaxwellianTests(SimpleTestCase):
    def test_value_at_origin_and_evenness(self):
        s = SpeciesParams(mass=2.0, eq_density=0.5)
        self.assertAlmostEqual(maxwellian(s, np.zeros(3)), 0.5 * (2.0 / (2.0 * np.pi)) ** 1.5, places=14)
        v = np.array([0.3, -1.2, 0.7])
        self.assertEqual(maxwellian(s, v), maxwellian(s, -v))
        self.assertGreater(maxwellian(s, [6.0, 6.0, 6.0]), 0.0)

    def test_shifted_maxwellian_reduces_to_global(self):
        s = SpeciesParams(mass=1.5, eq_density=0.8)
        v = np.array([[0.1, 0.2, 0.3], [1.0, -1.0, 2.0]])
        np.testing.assert_allclose(shifted_maxwellian(s, v, 0.8, np.zeros(3), 1.0), maxwellian(s, v), rtol=1e-14)

    def test_velocity_weight(self):
        w = WeightSpec(q=6.0)
        self.assertEqual(velocity_weight(w, np.zeros(3)), 1.0)
        self.assertAlmostEqual(velocity_weight(w, [1.0, 1.0, 1.0]), 4.0 ** 3, places=12)


class CollisionMapTests(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(42)

    def test_sigma_and_omega_maps_conserve(self):
        v = self.rng.uniform(-5, 5, (200, 3))
        vs = self.rng.uniform(-5, 5, (200, 3))
        for vp, vsp in (sigma_map(v, vs, 1.0, 3.5, unit(self.rng, 200)), omega_map(v, vs, 1.0, 3.5, unit(self.rng, 200))):
            dp, de = conservation_residuals(v, vs, vp, vsp, 1.0, 3.5)
            self.assertLess(dp.max(), 1e-13)
            self.assertLess(de.max(), 1e-13)
            self.assertTrue(np.all(energy_split_holds(v, vp, vsp, 1.0, 3.5)))

    def test_parameterizations_agree(self):
        v = self.rng.uniform(-3, 3, (50, 3))
        vs = self.rng.uniform(-3, 3, (50, 3))
        omega = unit(self.rng, 50)
        a = omega_map(v, vs, 2.0, 0.5, omega)
        b = sigma_map(v, vs, 2.0, 0.5, sigma_from_omega(v, vs, omega))
        np.testing.assert_allclose(a[0], b[0], atol=1e-12)
        np.testing.assert_allclose(a[1], b[1], atol=1e-12)

    def test_pair_helpers_require_unit_vectors(self):
        pair = CollisionPair(i=0, j=1, v=[1.0, 0.0, 0.0], v_star=[0.0, 1.0, 0.0])
        with self.assertRaises(NonUnitVectorError):
            post_collision_sigma(pair, [1.0, 2.0], [1.0, 1.0, 0.0])
        with self.assertRaises(NonUnitVectorError):
            post_collision_omega(pair, [1.0, 2.0], [0.0, 0.0, 2.0])
        vp, vsp = post_collision_sigma(pair, [1.0, 2.0], [0.0, 0.0, 1.0])
        np.testing.assert_allclose(1.0 * vp + 2.0 * vsp, [1.0, 2.0, 0.0], atol=1e-14)


class CarlemanGeometryTests(SimpleTestCase):
    def test_sphere_center_and_radius(self):
        v, vsp = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
        sphere = carleman_sphere(v, vsp, 1.0, 3.0)
        self.assertFalse(sphere.degenerate)
        np.testing.assert_allclose(sphere.center, (1.0 * v - 3.0 * vsp) / (1.0 - 3.0))
        self.assertAlmostEqual(sphere.radius, 3.0 * np.sqrt(2.0) / 2.0, places=14)

    def test_equal_masses_are_degenerate(self):
        sphere = carleman_sphere(np.ones(3), np.zeros(3), 2.0, 2.0)
        self.assertTrue(sphere.degenerate)
        self.assertIsNone(sphere.center)
        with self.assertRaises(DegenerateMassError):
            exponent_cancellation(np.ones(3), np.zeros(3), 2.0, 2.0)

    def test_exponent_cancellation(self):
        rng = np.random.default_rng(7)
        v = rng.uniform(-10, 10, (1000, 3))
        vsp = rng.uniform(-10, 10, (1000, 3))
        terms = exponent_terms(v, vsp, 0.7, 4.2)
        self.assertEqual(terms.shape, (5, 1000))
        lhs, rhs = exponent_cancellation_batch(v, vsp, 0.7, 4.2)
        np.testing.assert_array_equal(lhs, terms.sum(axis=0))
        scale = np.maximum(np.abs(rhs), np.abs(terms).max(axis=0))
        self.assertLess(np.max(np.abs(lhs - rhs) / scale), 1e-12)
        self.assertLessEqual(rhs.max(), 0.0)

    def test_exponent_terms_use_sphere_geometry(self):
        v, vsp = np.array([1.0, 2.0, -0.5]), np.array([0.3, -1.0, 0.0])
        sphere = carleman_sphere(v, vsp, 1.0, 3.0)
        terms = exponent_terms(v, vsp, 1.0, 3.0)
        self.assertAlmostEqual(terms[2], -0.25 * sphere.radius ** 2, places=12)
        self.assertAlmostEqual(terms[3], -0.25 * float(sphere.center @ sphere.center), places=12)

    def test_constant(self):
        self.assertEqual(carleman_constant(1.0, 2.0), 2.25)


class InvariantTests(SimpleTestCase):
    def test_parse_and_labels(self):
        inv = CollisionInvariant.parse("mass:2")
        self.assertEqual(inv.index, 1)
        self.assertEqual(inv.label, "mass_2")
        self.assertEqual(CollisionInvariant.parse("momentum:y").label, "py")
        self.assertEqual(CollisionInvariant.parse("energy").label, "energy")
        with self.assertRaises(InvalidParameterError):
            CollisionInvariant.parse("momentum:w")
        with self.assertRaises(InvalidParameterError):
            CollisionInvariant.parse("spin")

    def test_tables(self):
        species = [SpeciesParams(1.0), SpeciesParams(2.0)]
        nodes = np.array([[1.0, 2.0, 3.0], [0.0, 0.0, 0.0]])
        tables = invariant_tables(species, nodes)
        self.assertEqual(tables.shape, (6, 2, 2))
        self.assertEqual(len(all_invariants(2)), 6)
        np.testing.assert_allclose(tables[3, 1], [4.0, 0.0])  # py da espécie 2
        np.testing.assert_allclose(tables[5, 1], [14.0, 0.0])  # energia m|v|²/2
