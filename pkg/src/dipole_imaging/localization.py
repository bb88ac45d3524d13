"""Indicator sampling over rectangular grids and peak extraction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .forward import MeasurementSet
from .imaging import ImagingParams, indicator_values
from .scene import KINDS, MAGNETIC


@dataclass
class SamplingGrid:
    """Axis-aligned rectangular grid of sample points.

    Each axis holds `counts[i]` equally spaced nodes from lower[i] to
    upper[i]; an axis with count 1 must have equal corners and freezes that
    coordinate (e.g. a planar grid uses count 1 on the frozen axis).
    Nodes are enumerated in C order (last axis fastest).
    """

    lower: np.ndarray
    upper: np.ndarray
    counts: tuple[int, int, int]

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float).reshape(3)
        self.upper = np.asarray(self.upper, dtype=float).reshape(3)
        self.counts = tuple(int(c) for c in np.asarray(self.counts).reshape(3))
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("grid corners must be finite")
        if any(c < 1 for c in self.counts):
            raise ValueError("axis counts must be >= 1")
        for axis in range(3):
            if self.counts[axis] == 1:
                if self.lower[axis] != self.upper[axis]:
                    raise ValueError(f"axis {axis} has one node but unequal corners")
            elif not self.upper[axis] > self.lower[axis]:
                raise ValueError(f"axis {axis} needs upper > lower for multiple nodes")

    @property
    def num_nodes(self) -> int:
        return int(np.prod(self.counts))

    def axes(self) -> list[np.ndarray]:
        return [
            np.linspace(self.lower[i], self.upper[i], self.counts[i]) for i in range(3)
        ]

    def nodes(self) -> np.ndarray:
        """All grid nodes as an (num_nodes, 3) array in C order."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    @property
    def spacings(self) -> np.ndarray:
        out = np.zeros(3)
        for i in range(3):
            if self.counts[i] > 1:
                out[i] = (self.upper[i] - self.lower[i]) / (self.counts[i] - 1)
        return out

    @property
    def cell_diagonal(self) -> float:
        """Diagonal of one grid cell over the non-frozen axes."""
        return float(np.linalg.norm(self.spacings))


@dataclass
class IndicatorField:
    """Sharpened indicator samples of both kinds over a grid.

    values_mag / values_elec hold the rho-powered vote fractions with the
    grid's counts as array shape; rho is kept so thresholds on the base
    (pre-power) indicator can be applied.
    """

    grid: SamplingGrid
    values_mag: np.ndarray
    values_elec: np.ndarray
    rho: float

    def __post_init__(self):
        shape = tuple(self.grid.counts)
        self.values_mag = np.asarray(self.values_mag, dtype=float).reshape(shape)
        self.values_elec = np.asarray(self.values_elec, dtype=float).reshape(shape)
        for values in (self.values_mag, self.values_elec):
            if not np.all(np.isfinite(values)):
                raise ValueError("indicator values must be finite")
            if values.size and (values.min() < 0.0 or values.max() > 1.0):
                raise ValueError("indicator values must lie in [0, 1]")

    def values(self, kind: str) -> np.ndarray:
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
        return self.values_mag if kind == MAGNETIC else self.values_elec


def evaluate_field(ms: MeasurementSet, grid: SamplingGrid, params: ImagingParams) -> IndicatorField:
    """Evaluate both indicators at every grid node; deterministic."""
    values_mag, values_elec = indicator_values(grid.nodes(), ms, params)
    shape = tuple(grid.counts)
    return IndicatorField(
        grid=grid,
        values_mag=values_mag.reshape(shape),
        values_elec=values_elec.reshape(shape),
        rho=params.rho,
    )


def extract_peaks(field: IndicatorField, kind: str, threshold: float = 0.5) -> np.ndarray:
    """Grid nodes that beat the threshold and dominate their neighborhood.

    A node qualifies when its base (pre-rho) indicator exceeds `threshold`
    (a strict-majority default of 0.5 on the direction votes) and its value
    is >= all 26 neighbors (8 on planar grids). Ties between equal-valued
    neighbors go to the lexicographically first node index, so the output
    is deterministic. Peaks are returned as an (n, 3) array of node
    coordinates sorted by descending value, ties by node index.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    values = field.values(kind)
    # base indicator > threshold  <=>  rho-powered value > threshold**rho
    mask = values > threshold**field.rho
    padded = np.pad(values, 1, constant_values=-1.0)
    nx, ny, nz = values.shape
    for offset in itertools.product((-1, 0, 1), repeat=3):
        if offset == (0, 0, 0):
            continue
        dx, dy, dz = offset
        shifted = padded[1 + dx : 1 + dx + nx, 1 + dy : 1 + dy + ny, 1 + dz : 1 + dz + nz]
        if offset > (0, 0, 0):
            # neighbor has a larger C-order index: keep the node on ties
            mask &= values >= shifted
        else:
            mask &= values > shifted
    index_triples = np.argwhere(mask)
    if index_triples.size == 0:
        return np.empty((0, 3))
    flat = np.ravel_multi_index(index_triples.T, values.shape)
    order = np.lexsort((flat, -values[tuple(index_triples.T)]))
    axes = field.grid.axes()
    picked = index_triples[order]
    return np.stack([axes[i][picked[:, i]] for i in range(3)], axis=1)
