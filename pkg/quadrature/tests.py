# quadrature/tests.py
import numpy as np
from django.test import SimpleTestCase, override_settings

from core.exceptions import GridMismatchError, InvalidParameterError

from .grids import VelocityGrid, grid_integral, integrate_nodes
from .sphere import (
    aligned_directions,
    make_sphere_rule,
    sphere_average_exp,
    sphere_average_exp_exact,
)


class VelocityGridTests(SimpleTestCase):
    def test_cell_centered_layout(self):
        grid = VelocityGrid(half_width=4.0, points_per_axis=8)
        self.assertEqual(grid.spacing, 1.0)
        self.assertEqual(grid.node_count, 512)
        np.testing.assert_allclose(grid.axis, np.arange(-3.5, 4.0, 1.0))
        self.assertEqual(grid.nodes.shape, (512, 3))

    def test_invalid_grids(self):
        with self.assertRaises(InvalidParameterError):
            VelocityGrid(half_width=0.0)
        with self.assertRaises(InvalidParameterError):
            VelocityGrid(points_per_axis=9)
        with self.assertRaises(InvalidParameterError):
            VelocityGrid(points_per_axis=6)

    def test_reflect_maps_v_to_minus_v(self):
        grid = VelocityGrid(half_width=3.0, points_per_axis=8)
        np.testing.assert_array_equal(grid.reflect(grid.nodes[:, 0]), -grid.nodes[:, 0])

    def test_integral_of_gaussian(self):
        grid = VelocityGrid(half_width=7.0, points_per_axis=28)
        values = np.exp(-0.5 * np.sum(grid.nodes ** 2, axis=1)) / (2.0 * np.pi) ** 1.5
        self.assertAlmostEqual(grid_integral(grid, values), 1.0, places=10)
        np.testing.assert_allclose(integrate_nodes(grid, np.stack([values, 2 * values])), [1.0, 2.0], rtol=1e-10)

    def test_integral_checks_length(self):
        grid = VelocityGrid(half_width=3.0, points_per_axis=8)
        with self.assertRaises(GridMismatchError):
            grid_integral(grid, np.ones(10))

    def test_parallel_sum_is_worker_independent(self):
        grid = VelocityGrid(half_width=3.0, points_per_axis=48)
        values = np.random.default_rng(3).random(grid.node_count)
        self.assertEqual(grid_integral(grid, values, workers=1), grid_integral(grid, values, workers=4))

    def test_interpolation_is_exact_for_linear_data_and_zero_outside(self):
        grid = VelocityGrid(half_width=4.0, points_per_axis=8)
        values = 2.0 + grid.nodes @ np.array([1.0, -0.5, 0.25])
        points = np.array([[0.1, 0.2, -0.3], [1.7, -2.2, 0.9]])
        np.testing.assert_allclose(grid.interpolate(values, points), 2.0 + points @ np.array([1.0, -0.5, 0.25]), atol=1e-12)
        self.assertEqual(float(grid.interpolate(values, np.array([[10.0, 0.0, 0.0]]))[0]), 0.0)

    def test_interpolation_preserves_positivity(self):
        grid = VelocityGrid(half_width=4.0, points_per_axis=8)
        values = np.random.default_rng(1).random(grid.node_count)
        points = np.random.default_rng(2).uniform(-5, 5, (200, 3))
        self.assertGreaterEqual(grid.interpolate(values, points).min(), 0.0)
        self.assertGreaterEqual(grid.interpolate(values, points, extend="nearest").min(), 0.0)

    def test_nearest_extension_keeps_constants(self):
        grid = VelocityGrid(half_width=4.0, points_per_axis=8)
        points = np.array([[10.0, 0.0, 0.0], [-7.0, 6.0, 4.1], [0.3, 0.3, 0.3]])
        np.testing.assert_allclose(grid.interpolate(np.full(grid.node_count, 3.0), points, extend="nearest"), 3.0)

    def test_quadratic_interpolation_reproduces_quadratics(self):
        grid = VelocityGrid(half_width=4.0, points_per_axis=8)

        def poly(x):
            return 1.0 - 0.5 * x[..., 0] + x[..., 1] * x[..., 2] + 0.3 * np.sum(x ** 2, axis=-1)

        # dentro da malha e fora dela (extrapolação)
        points = np.array([[0.1, 0.2, -0.3], [1.7, -2.2, 0.9], [3.9, -3.9, 0.0], [6.5, 1.0, -5.2]])
        np.testing.assert_allclose(grid.interpolate_quadratic(poly(grid.nodes), points), poly(points), rtol=1e-10, atol=1e-10)
        cube = points.reshape(2, 2, 3)
        self.assertEqual(grid.quadratic_interpolator(poly(grid.nodes))(cube).shape, (2, 2))


class SphereRuleTests(SimpleTestCase):
    def test_rule_limits(self):
        with self.assertRaises(InvalidParameterError):
            make_sphere_rule(n_polar=2)
        with self.assertRaises(InvalidParameterError):
            make_sphere_rule(n_polar=8, n_azimuth=4)

    def test_weights_and_profiles(self):
        rule = make_sphere_rule(4, 8)
        self.assertEqual(rule.size, 32)
        self.assertAlmostEqual(rule.weights.sum(), 4.0 * np.pi, places=13)
        self.assertAlmostEqual(rule.integrate_profile(np.abs), 2.0 * np.pi, places=13)
        self.assertAlmostEqual(rule.integrate_profile(lambda t: t * t), 4.0 * np.pi / 3.0, places=13)
        np.testing.assert_allclose(np.linalg.norm(rule.nodes, axis=1), 1.0, atol=1e-15)

    def test_exponential_average(self):
        rule = make_sphere_rule(32, 64)
        rng = np.random.default_rng(11)
        for _ in range(20):
            k = rng.uniform(0.1, 3.0)
            x = rng.standard_normal(3)
            x *= rng.uniform(0.0, 6.0 / k) / np.linalg.norm(x)
            exact = sphere_average_exp_exact(k, x)
            self.assertLess(abs(sphere_average_exp(rule, k, x) - exact) / exact, 1e-8)
        with self.assertRaises(InvalidParameterError):
            sphere_average_exp(rule, 0.0, np.ones(3))
        self.assertAlmostEqual(sphere_average_exp_exact(1.0, np.zeros(3)), 4.0 * np.pi, places=14)

    def test_aligned_directions_keep_polar_cosines(self):
        rule = make_sphere_rule(4, 8)
        u = np.array([[0.0, 0.6, 0.8], [1.0, 0.0, 0.0]])
        dirs = aligned_directions(rule, u)
        self.assertEqual(dirs.shape, (2, rule.size, 3))
        for k in range(2):
            np.testing.assert_allclose(dirs[k] @ u[k], rule.cos_polar, atol=1e-14)
            np.testing.assert_allclose(np.linalg.norm(dirs[k], axis=1), 1.0, atol=1e-14)


@override_settings(KINETIC_WORKERS=2)
class SettingsWorkersTests(SimpleTestCase):
    def test_default_workers_from_settings(self):
        grid = VelocityGrid(half_width=3.0, points_per_axis=8)
        self.assertAlmostEqual(grid_integral(grid, np.ones(grid.node_count)), 216.0, places=10)
