"""Reproducible sub-streams derived from a single user seed.

Every random draw is keyed by ``(seed, purpose tag, index)`` so results do not
depend on the order in which trials or realizations are executed.
"""

import zlib

import numpy as np


def derive_seed(seed: int, tag: str, *index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), zlib.crc32(tag.encode("utf-8")), *map(int, index)])


def stream(seed: int, tag: str, *index: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, tag, *index))


def complex_normal(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples with E|x|^2 = variance."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
