# core/parallel.py
"""
Paralelismo determinístico.

- Os blocos têm tamanho fixo, derivado só do problema (nunca do número de threads).
- Cada bloco é calculado por inteiro numa thread; os resultados são combinados na ordem.
Assim o resultado é bit a bit o mesmo com 1 ou 16 workers.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np
from django.conf import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")

# blocos da redução em dois níveis
SUM_BLOCK = 1 << 16


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = getattr(settings, "KINETIC_WORKERS", 1)
    return max(1, int(workers))


def chunk_slices(n_items: int, chunk_size: int) -> list[slice]:
    chunk_size = max(1, int(chunk_size))
    return [slice(a, min(a + chunk_size, n_items)) for a in range(0, n_items, chunk_size)]


def rows_per_chunk(inner_elements: int) -> int:
    """Linhas de saída por bloco para que cada bloco tenha ~KINETIC_CHUNK_ELEMENTS elementos."""
    target = int(getattr(settings, "KINETIC_CHUNK_ELEMENTS", 2_000_000))
    return max(1, target // max(1, inner_elements))


def map_chunks(
    fn: Callable[[slice], T],
    chunks: Sequence[slice],
    workers: int | None = None,
) -> list[T]:
    workers = resolve_workers(workers)
    if workers == 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


def parallel_sum(values: np.ndarray, workers: int | None = None) -> float:
    """Soma com árvore fixa: blocos de SUM_BLOCK (soma par-a-par do numpy) e depois as parciais em ordem."""
    flat = np.ascontiguousarray(values, dtype=float).ravel()
    if flat.size <= SUM_BLOCK:
        return float(np.sum(flat))
    partials = map_chunks(lambda s: np.sum(flat[s]), chunk_slices(flat.size, SUM_BLOCK), workers)
    return float(np.sum(np.asarray(partials)))
