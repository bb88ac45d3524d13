"""Observation-direction sets on the unit sphere and small 3-vector helpers.

Directions are ordered and index-addressable: measurement files refer to a
direction by its position in the set. Two generators are provided, a
quasi-uniform sphere lattice with golden-ratio azimuth steps and an equally
spaced in-plane family, plus validity checks (pairwise non-collinearity,
no coplanar triples) used by the reconstruction pipeline.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

#: Golden-ratio azimuth increment for the sphere lattice.
GOLDEN_RATIO = (np.sqrt(5.0) - 1.0) / 2.0

#: Directions must be unit vectors within this tolerance.
UNIT_NORM_TOL = 1e-12

#: Cross/triple products below this are treated as degenerate. Well above
#: double-precision noise, far below the spacing of any lattice used here.
DEGENERACY_TOL = 1e-10

PROVENANCES = ("fibonacci", "planar", "explicit")


def triple_product(a, b, c) -> float:
    """Scalar triple product a . (b x c)."""
    return float(np.dot(np.asarray(a, dtype=float), np.cross(b, c)))


@dataclass
class DirectionSet:
    """Ordered observation directions on the unit sphere.

    directions: (L, 3) array of unit vectors, no two collinear.
    provenance: 'fibonacci' | 'planar' | 'explicit'; planar sets must lie
        in the z = 0 plane. The provenance tells the pipeline which
        uniqueness predicate applies (no-three-coplanar vs pairwise
        independence).
    """

    directions: np.ndarray
    provenance: str = "explicit"

    def __post_init__(self):
        dirs = np.atleast_2d(np.asarray(self.directions, dtype=float))
        if dirs.ndim != 2 or dirs.shape[1] != 3 or dirs.shape[0] < 1:
            raise ValueError("directions must form an (L, 3) array with L >= 1")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        norms = np.linalg.norm(dirs, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            bad = int(np.argmax(np.abs(norms - 1.0)))
            raise ValueError(f"direction {bad} is not unit length: |x|={norms[bad]!r}")
        if self.provenance == "planar" and np.any(dirs[:, 2] != 0.0):
            raise ValueError("planar directions must have zero third component")
        if len(dirs) > 1:
            crosses = np.linalg.norm(np.cross(dirs[:, None, :], dirs[None, :, :]), axis=2)
            iu = np.triu_indices(len(dirs), k=1)
            worst = int(np.argmin(crosses[iu]))
            if crosses[iu][worst] <= DEGENERACY_TOL:
                i, j = iu[0][worst], iu[1][worst]
                raise ValueError(f"directions {i} and {j} are collinear")
        self.directions = dirs

    def __len__(self) -> int:
        return self.directions.shape[0]

    def __getitem__(self, index: int) -> np.ndarray:
        return self.directions[index]


def fibonacci_directions(count: int) -> DirectionSet:
    """Quasi-uniform sphere lattice with golden-ratio azimuth increments.

    Direction l (1-based, l = 1..count) has third component 1 - 2l/count
    and azimuth 2*pi*l*phi with phi = (sqrt(5) - 1)/2.
    """
    if count < 1:
        raise ValueError("direction count must be a positive integer")
    l = np.arange(1, count + 1, dtype=float)
    x3 = 1.0 - 2.0 * l / count
    radial = np.sqrt(np.maximum(0.0, 1.0 - x3 * x3))
    azimuth = 2.0 * np.pi * l * GOLDEN_RATIO
    dirs = np.column_stack([radial * np.cos(azimuth), radial * np.sin(azimuth), x3])
    return DirectionSet(dirs, provenance="fibonacci")


def planar_directions(count: int) -> DirectionSet:
    """Equally spaced directions (cos(pi*l/count), sin(pi*l/count), 0), l = 1..count.

    Angles lie in (0, pi], so any two directions are linearly independent.
    """
    if count < 1:
        raise ValueError("direction count must be a positive integer")
    angles = np.pi * np.arange(1, count + 1, dtype=float) / count
    dirs = np.column_stack([np.cos(angles), np.sin(angles), np.zeros(count)])
    return DirectionSet(dirs, provenance="planar")


def no_three_coplanar(ds: DirectionSet) -> bool:
    """True iff every direction triple has |scalar triple product| > 1e-10.

    This is a runtime check, not an assumption: the sphere lattice is only
    conjectured to avoid coplanar triples, so callers must verify the set
    they actually use.
    """
    dirs = ds.directions
    if len(ds) < 3:
        return True
    idx = np.array(list(itertools.combinations(range(len(ds)), 3)))
    dets = np.linalg.det(dirs[idx])
    return bool(np.all(np.abs(dets) > DEGENERACY_TOL))
