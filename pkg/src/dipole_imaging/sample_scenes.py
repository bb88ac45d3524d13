"""Bundled demonstration scenes used by the experiment scripts and tests."""

from __future__ import annotations

from .scene import ELECTRIC, MAGNETIC, Dipole, Scene


def axis_mixed_scene() -> Scene:
    """Three magnetic and three electric dipoles on the coordinate axes."""
    return Scene(
        [
            Dipole(MAGNETIC, (-1.0, 0.0, 0.0), (1.0, 1.0, -1.0)),
            Dipole(MAGNETIC, (0.0, -1.0, 0.0), (-0.5, 0.0, 1.0)),
            Dipole(MAGNETIC, (0.0, 0.0, -1.0), (-1.0, 0.2, 0.0)),
            Dipole(ELECTRIC, (1.0, 0.0, 0.0), (1.0, 1.0, 1.0)),
            Dipole(ELECTRIC, (0.0, 1.0, 0.0), (0.5, 0.0, 1.0)),
            Dipole(ELECTRIC, (0.0, 0.0, 1.0), (1.0, 0.2, 0.0)),
        ]
    )


def planar_array_scene() -> Scene:
    """Nineteen magnetic dipoles in the z = 0 plane with mixed polarizations."""
    rows = [
        ((1.4, 1.4, 0.0), (1.20 + 1.49j, 0.0, 0.0)),
        ((0.8, 1.4, 0.0), (0.0, -1.40 - 0.63j, 0.0)),
        ((0.4, 1.0, 0.0), (1.00 - 0.96j, 0.0, 0.0)),
        ((-0.2, 1.0, 0.0), (1.20 + 0.84j, 0.0, 0.0)),
        ((-0.8, 1.0, 0.0), (0.0, 0.83 - 1.41j, 0.0)),
        ((-1.2, 0.6, 0.0), (0.90 + 1.43j, 0.0, 0.0)),
        ((0.0, 0.6, 0.0), (0.0, 0.0, 1.35 - 0.97j)),
        ((-0.8, -0.2, 0.0), (0.0, 0.0, 1.19 + 1.28j)),
        ((-1.2, -0.2, 0.0), (1.45 - 0.58j, 0.0, 0.0)),
        ((-0.8, -0.6, 0.0), (0.0, 0.0, 0.67 + 1.44j)),
        ((-0.6, -0.8, 0.0), (-1.08 - 1.47j, 0.0, 0.0)),
        ((-0.2, -1.2, 0.0), (1.00 + 1.39j, 0.0, 0.0)),
        ((-0.2, -0.8, 0.0), (0.0, -1.16 + 1.44j, 0.0)),
        ((0.6, 0.0, 0.0), (-0.52 - 0.70j, 0.0, 0.0)),
        ((0.6, -1.2, 0.0), (1.02 + 1.15j, 0.0, 0.0)),
        ((1.0, -0.8, 0.0), (0.77 + 0.79j, 0.0, 0.0)),
        ((1.0, -0.2, 0.0), (1.42 - 1.07j, 0.0, 0.0)),
        ((1.0, 0.4, 0.0), (0.0, 0.82 + 0.87j, 0.0)),
        ((1.4, 0.8, 0.0), (-1.32 - 0.65j, 0.0, 0.0)),
    ]
    return Scene([Dipole(MAGNETIC, loc, q) for loc, q in rows])
