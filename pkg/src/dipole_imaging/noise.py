"""Calibrated multiplicative measurement noise.

For each wavenumber node and each sign of the observation directions, the
L x 3 complex data block F is perturbed to

    F + delta * ||F|| * (R1 + i*R2) / ||R1 + i*R2||

with independent standard-normal matrices R1, R2 and Frobenius norms, so
the per-block relative error ||F_noisy - F|| / ||F|| equals delta exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forward import MeasurementSet

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class NoiseSpec:
    """Relative noise level and RNG seed."""

    delta: float
    seed: int = 0

    def __post_init__(self):
        if not self.delta >= 0:
            raise ValueError("noise level delta must be >= 0")


def _block_generator(seed: int, sign_index: int, node_index: int) -> np.random.Generator:
    """Counter-based substream for one (sign, frequency) block.

    Philox keyed by SeedSequence(seed, spawn_key=(sign, node)) makes blocks
    statistically independent and the result independent of the order in
    which blocks are processed.
    """
    ss = np.random.SeedSequence(seed & _SEED_MASK, spawn_key=(sign_index, node_index))
    return np.random.Generator(np.random.Philox(ss))


def add_noise(ms: MeasurementSet, spec: NoiseSpec) -> MeasurementSet:
    """Perturb every (frequency, sign) block; deterministic given the seed."""
    if spec.delta == 0:
        return MeasurementSet(ms.directions, ms.grid, ms.samples.copy())
    out = np.empty_like(ms.samples)
    n_dirs = len(ms.directions)
    for sign_index in (0, 1):
        for j in range(ms.grid.count):
            block = ms.samples[sign_index, :, j, :]
            rng = _block_generator(spec.seed, sign_index, j)
            draw = rng.standard_normal((2, n_dirs, 3))
            g = draw[0] + 1j * draw[1]
            out[sign_index, :, j, :] = block + (
                spec.delta * np.linalg.norm(block) / np.linalg.norm(g)
            ) * g
    return MeasurementSet(ms.directions, ms.grid, out)
