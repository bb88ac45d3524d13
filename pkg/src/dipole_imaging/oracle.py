"""Brute-force plane-counting checks behind the uniqueness guarantees.

Each (direction, source) pair defines the plane through the source with
that direction as normal. Counting the planes through an arbitrary point
separates sources from everything else: at a source the count equals the
number of directions L, while off-source it stays below a small multiple
of the source count (2M when no three directions are coplanar, M when
everything lies in a common plane with pairwise independent directions).
These counters are shipped as library code so direction sets can be
audited against the bounds before trusting a reconstruction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import DirectionSet
from .scene import ELECTRIC, KINDS, MAGNETIC, Scene

SUBSETS = ("all", "magnetic-only", "electric-only")

#: Default tolerance for |xhat . (z - z_m)| = 0 tests on grid-style inputs.
PLANE_TOL = 1e-9

_IN_PLANE_TOL = 1e-12


@dataclass
class PlaneArrangement:
    """Source locations plus a direction set; one plane per (direction, source)."""

    locations: np.ndarray
    kinds: tuple[str, ...]
    directions: DirectionSet

    def __post_init__(self):
        self.locations = np.asarray(self.locations, dtype=float).reshape(-1, 3)
        self.kinds = tuple(self.kinds)
        if len(self.kinds) != len(self.locations):
            raise ValueError("one kind per location required")
        if any(kind not in KINDS for kind in self.kinds):
            raise ValueError(f"kinds must be drawn from {KINDS}")

    @classmethod
    def from_scene(cls, scene: Scene, ds: DirectionSet) -> "PlaneArrangement":
        return cls(
            locations=scene.locations(),
            kinds=tuple(d.kind for d in scene.dipoles),
            directions=ds,
        )

    def _subset_locations(self, subset: str) -> np.ndarray:
        if subset == "all":
            return self.locations
        if subset == "magnetic-only":
            keep = MAGNETIC
        elif subset == "electric-only":
            keep = ELECTRIC
        else:
            raise ValueError(f"subset must be one of {SUBSETS}, got {subset!r}")
        mask = [kind == keep for kind in self.kinds]
        return self.locations[np.asarray(mask, dtype=bool)]


def count_planes(z, arrangement: PlaneArrangement, subset: str = "all", tol: float = PLANE_TOL) -> int:
    """Number of (direction, source) pairs with |xhat . (z - z_m)| <= tol."""
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    z = np.asarray(z, dtype=float).reshape(3)
    locations = arrangement._subset_locations(subset)
    if len(locations) == 0:
        return 0
    separations = np.abs((z - locations) @ arrangement.directions.directions.T)
    return int(np.count_nonzero(separations <= tol))


def count_planes_planar(z, arrangement: PlaneArrangement, tol: float = PLANE_TOL) -> int:
    """Plane count for the in-plane configuration (everything in z^3 = 0).

    Rejects out-of-plane sample points, sources or directions: the sharper
    off-source bound (<= M) only holds in the common-plane geometry.
    """
    z = np.asarray(z, dtype=float).reshape(3)
    if abs(z[2]) > _IN_PLANE_TOL:
        raise ValueError("sample point must lie in the z^3 = 0 plane")
    if np.any(np.abs(arrangement.locations[:, 2]) > _IN_PLANE_TOL):
        raise ValueError("all source locations must lie in the z^3 = 0 plane")
    if np.any(np.abs(arrangement.directions.directions[:, 2]) > _IN_PLANE_TOL):
        raise ValueError("all directions must lie in the z^3 = 0 plane")
    return count_planes(z, arrangement, subset="all", tol=tol)


def required_directions_full_space(magnetic_count: int, electric_count: int) -> int:
    """Directions needed for the general-position uniqueness guarantee."""
    return max(4 * magnetic_count, 4 * electric_count)


def required_directions_in_plane(magnetic_count: int, electric_count: int) -> int:
    """Directions needed for the common-plane uniqueness guarantee (strict bound)."""
    return max(2 * magnetic_count, 2 * electric_count) + 1
