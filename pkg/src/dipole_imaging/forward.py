"""Exact electric far-field patterns of point dipoles and measurement synthesis.

A magnetic dipole at z with strength q radiates the electric far field

    (i*k / 4*pi) * exp(-i*k * xhat.z) * (xhat x q),

an electric dipole the transverse-projected analogue

    (i*k / 4*pi) * exp(-i*k * xhat.z) * (xhat x (q x xhat)).

Both are tangential to the observation direction xhat. A measurement set
samples the scene total at +/- every observation direction over a uniform
wavenumber grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import DirectionSet
from .scene import MAGNETIC, Scene

FOUR_PI = 4.0 * np.pi

#: Sign-axis indices into MeasurementSet.samples.
SIGN_POSITIVE = 0
SIGN_NEGATIVE = 1


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform wavenumber nodes k_j = j * k_max / count for j = 1..count.

    k = 0 is deliberately excluded: the far field vanishes linearly there
    and downstream integrands divide by ik.
    """

    k_max: float
    count: int

    def __post_init__(self):
        if not self.k_max > 0:
            raise ValueError("k_max must be positive")
        if self.count < 2:
            raise ValueError("frequency grid needs at least two nodes")

    @property
    def delta_k(self) -> float:
        return self.k_max / self.count

    @property
    def nodes(self) -> np.ndarray:
        return self.delta_k * np.arange(1, self.count + 1)


def suggest_node_count(k_max: float, r_max: float, nodes_per_period: int = 16) -> int:
    """Node count so the slowest-decaying integrand is well resolved.

    Ensures delta_k * r_max <= 2*pi / nodes_per_period, i.e. at least
    `nodes_per_period` nodes per oscillation of exp(i*k*s) for any phase
    distance |s| <= r_max. Rounded up to an even count so half-band cuts
    land on a node.
    """
    if not (k_max > 0 and r_max > 0):
        raise ValueError("k_max and r_max must be positive")
    count = math.ceil(k_max * r_max * nodes_per_period / (2.0 * np.pi))
    count = max(count, 2)
    return count + (count % 2)


@dataclass
class MeasurementSet:
    """Electric far-field samples over (sign, direction, frequency).

    samples[s, l, j] is the complex 3-vector measured at direction
    +xhat_l (s = 0) or -xhat_l (s = 1) and wavenumber nodes[j].
    """

    directions: DirectionSet
    grid: FrequencyGrid
    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)
        expected = (2, len(self.directions), self.grid.count, 3)
        if self.samples.shape != expected:
            raise ValueError(f"samples must have shape {expected}, got {self.samples.shape}")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")


def _check_wavenumber(k: np.ndarray):
    if np.any(k <= 0) or not np.all(np.isfinite(k)):
        raise ValueError("wavenumber must be positive and finite")


def far_field_magnetic(x_hat, z, q, k):
    """(ik/4pi) * exp(-ik xhat.z) * (xhat x q); k scalar or (n,) array."""
    x_hat = np.asarray(x_hat, dtype=float)
    q = np.asarray(q, dtype=complex)
    k = np.asarray(k, dtype=float)
    _check_wavenumber(k)
    amp = (1j * k / FOUR_PI) * np.exp(-1j * k * float(np.dot(x_hat, z)))
    return np.multiply.outer(amp, np.cross(x_hat, q))


def far_field_electric(x_hat, z, q, k):
    """(ik/4pi) * exp(-ik xhat.z) * (xhat x (q x xhat)); k scalar or (n,) array."""
    x_hat = np.asarray(x_hat, dtype=float)
    q = np.asarray(q, dtype=complex)
    k = np.asarray(k, dtype=float)
    _check_wavenumber(k)
    amp = (1j * k / FOUR_PI) * np.exp(-1j * k * float(np.dot(x_hat, z)))
    return np.multiply.outer(amp, np.cross(x_hat, np.cross(q, x_hat)))


def far_field_scene(x_hat, k, scene: Scene):
    """Superposition of the far fields of all dipoles in the scene."""
    k_arr = np.asarray(k, dtype=float)
    _check_wavenumber(k_arr)
    total = np.zeros(k_arr.shape + (3,), dtype=complex)
    for d in scene.dipoles:
        kernel = far_field_magnetic if d.kind == MAGNETIC else far_field_electric
        total += kernel(x_hat, d.location, d.strength, k)
    return total


def simulate_measurements(scene: Scene, ds: DirectionSet, grid: FrequencyGrid) -> MeasurementSet:
    """Evaluate the scene far field at +/- every direction over all nodes.

    Deterministic; every (sign, direction, frequency) cell is independent.
    """
    nodes = grid.nodes
    samples = np.empty((2, len(ds), grid.count, 3), dtype=complex)
    for l in range(len(ds)):
        samples[SIGN_POSITIVE, l] = far_field_scene(ds[l], nodes, scene)
        samples[SIGN_NEGATIVE, l] = far_field_scene(-ds[l], nodes, scene)
    return MeasurementSet(directions=ds, grid=grid, samples=samples)
