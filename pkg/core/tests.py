# core/tests.py
import numpy as np
from django.test import SimpleTestCase, override_settings

from .exceptions import ConfigError, DegenerateMassError, KineticError
from .parallel import SUM_BLOCK, chunk_slices, map_chunks, parallel_sum, resolve_workers, rows_per_chunk


class ParallelTests(SimpleTestCase):
    def test_chunks_cover_range_in_order(self):
        slices = chunk_slices(10, 4)
        self.assertEqual([(s.start, s.stop) for s in slices], [(0, 4), (4, 8), (8, 10)])
        self.assertEqual(chunk_slices(0, 4), [])

    @override_settings(KINETIC_CHUNK_ELEMENTS=1000)
    def test_rows_per_chunk_uses_settings(self):
        self.assertEqual(rows_per_chunk(100), 10)
        self.assertEqual(rows_per_chunk(5000), 1)

    @override_settings(KINETIC_WORKERS=6)
    def test_workers_default_from_settings(self):
        self.assertEqual(resolve_workers(None), 6)
        self.assertEqual(resolve_workers(0), 1)

    def test_map_keeps_chunk_order(self):
        out = map_chunks(lambda s: (s.start, s.stop), chunk_slices(50, 7), workers=4)
        self.assertEqual(out, [(s.start, s.stop) for s in chunk_slices(50, 7)])

    def test_sum_is_bitwise_reproducible(self):
        values = np.random.default_rng(0).standard_normal(3 * SUM_BLOCK + 17)
        results = {parallel_sum(values, workers=w) for w in (1, 2, 5)}
        self.assertEqual(len(results), 1)
        self.assertAlmostEqual(results.pop(), float(np.sum(values)), places=9)


class ExceptionTests(SimpleTestCase):
    def test_hierarchy_and_messages(self):
        self.assertTrue(issubclass(KineticError, ValueError))
        err = ConfigError({"kernel.gamma": ["Deve estar em [0, 1]."], "grid.points": ["Deve ser par."]})
        self.assertEqual(str(err).splitlines()[1:], ["  grid.points: Deve ser par.", "  kernel.gamma: Deve estar em [0, 1]."])
        degenerate = DegenerateMassError(2.0, 2.0)
        self.assertEqual((degenerate.m_i, degenerate.m_j), (2.0, 2.0))
        self.assertIn("Ramo degenerado", str(degenerate))
