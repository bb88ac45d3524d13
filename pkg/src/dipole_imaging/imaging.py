"""Band-limited decoupling integrals and thresholded location indicators.

The two integrals

    (2*pi/K) * Int_0^K (1/ik) [e^{ik xhat.z} E(xhat,k) -/+ e^{-ik xhat.z} E(-xhat,k)] dk

('-' magnetic, '+' electric) converge, as K grows, to the sum of xhat x q_m
(respectively xhat x (q_m x xhat)) over dipoles of the matching kind whose
plane xhat.(z - z_m) = 0 contains z, while contributions of the other kind
and of off-plane dipoles decay like 1/K. Counting the directions where the
integral magnitude beats a cut-off gives an indicator that peaks at dipole
locations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forward import SIGN_NEGATIVE, SIGN_POSITIVE, FrequencyGrid, MeasurementSet
from .scene import KINDS, MAGNETIC

_CHUNK = 4096


@dataclass(frozen=True)
class ImagingParams:
    """Band limit K, cut-off epsilon and sharpening exponent rho.

    epsilon should sit below the strength magnitude of every dipole of
    interest; it is a free parameter here, never auto-tuned. rho >= 1
    sharpens peaks; it is applied to the direction-vote fraction, which
    keeps values in [0, 1].
    """

    k_max: float = 100.0
    epsilon: float = 0.2
    rho: float = 4.0

    def __post_init__(self):
        if not self.k_max > 0:
            raise ValueError("k_max must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.rho >= 1:
            raise ValueError("rho must be >= 1")


def cutoff(t: float, epsilon: float) -> float:
    """Hard threshold: 1 if t > epsilon else 0."""
    if t < 0:
        raise ValueError("cutoff argument must be >= 0")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return 1.0 if t > epsilon else 0.0


def band_quadrature(grid: FrequencyGrid, k_max: float | None = None):
    """Nodes and weights approximating Int_0^K g(k) dk on grid nodes <= k_max.

    Composite trapezoid on [k_1, k_n] plus a left-endpoint extension of the
    bounded integrand over the [0, k_1) sliver, i.e. weights
    delta_k * [3/2, 1, ..., 1, 1/2]. The effective band edge snaps down to
    the largest node <= k_max.
    """
    nodes = grid.nodes
    if k_max is None:
        n = grid.count
    else:
        if k_max > grid.k_max * (1.0 + 1e-12):
            raise ValueError(
                f"requested band K={k_max} exceeds measured band k_max={grid.k_max}"
            )
        n = int(np.searchsorted(nodes, k_max * (1.0 + 1e-12), side="right"))
        if n < 2:
            raise ValueError("band must contain at least two frequency nodes")
    k = nodes[:n]
    weights = np.full(n, grid.delta_k)
    weights[0] = 1.5 * grid.delta_k
    weights[-1] = 0.5 * grid.delta_k
    return k, weights


def band_integrals(points, ms: MeasurementSet, k_max: float | None = None):
    """Evaluate both decoupling integrals at many sample points.

    Returns (mag, elec), each of shape (n_points, L, 3). Work is chunked
    over points; the per-point reduction over frequency nodes has a fixed
    order, so results are independent of chunking and of which other points
    are evaluated alongside.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.ndim != 2 or points.shape[1] != 3:
        raise ValueError("points must form an (n, 3) array")
    if not np.all(np.isfinite(points)):
        raise ValueError("points must be finite")
    k, weights = band_quadrature(ms.grid, k_max)
    n = k.size
    band_edge = k[-1]
    coeff = (2.0 * np.pi / band_edge) * weights / (1j * k)
    dirs = ms.directions.directions
    n_dirs = dirs.shape[0]
    n_pts = points.shape[0]
    mag = np.empty((n_pts, n_dirs, 3), dtype=complex)
    elec = np.empty((n_pts, n_dirs, 3), dtype=complex)
    for l in range(n_dirs):
        a_plus = coeff[:, None] * ms.samples[SIGN_POSITIVE, l, :n, :]
        a_minus_conj = np.conj(coeff[:, None] * ms.samples[SIGN_NEGATIVE, l, :n, :])
        d0, d1, d2 = dirs[l]
        for start in range(0, n_pts, _CHUNK):
            rows = slice(start, min(start + _CHUNK, n_pts))
            # fixed-order dot product: results must not depend on how many
            # points are evaluated together (BLAS matvec does not guarantee that)
            s = points[rows, 0] * d0 + points[rows, 1] * d1 + points[rows, 2] * d2
            phases = np.exp(1j * np.outer(s, k))
            plus = np.einsum("pj,jc->pc", phases, a_plus, optimize=False)
            minus = np.conj(np.einsum("pj,jc->pc", phases, a_minus_conj, optimize=False))
            mag[rows, l, :] = plus - minus
            elec[rows, l, :] = plus + minus
    return mag, elec


def band_integral_magnetic(z, direction_index: int, ms: MeasurementSet, k_max: float | None = None):
    """Magnetic decoupling integral at one point and one direction."""
    mag, _ = band_integrals(np.asarray(z, dtype=float).reshape(1, 3), ms, k_max)
    return mag[0, direction_index]


def band_integral_electric(z, direction_index: int, ms: MeasurementSet, k_max: float | None = None):
    """Electric decoupling integral at one point and one direction."""
    _, elec = band_integrals(np.asarray(z, dtype=float).reshape(1, 3), ms, k_max)
    return elec[0, direction_index]


def indicator_values(points, ms: MeasurementSet, params: ImagingParams):
    """Sharpened vote fractions for both kinds at many points.

    For each point, each kind counts the directions whose band-integral
    magnitude exceeds epsilon; the fraction of votes is raised to rho.
    Returns (mag_values, elec_values), each (n_points,) in [0, 1].
    """
    mag, elec = band_integrals(points, ms, params.k_max)
    n_dirs = mag.shape[1]
    votes_mag = np.count_nonzero(np.linalg.norm(mag, axis=2) > params.epsilon, axis=1)
    votes_elec = np.count_nonzero(np.linalg.norm(elec, axis=2) > params.epsilon, axis=1)
    return (votes_mag / n_dirs) ** params.rho, (votes_elec / n_dirs) ** params.rho


def indicator(z, ms: MeasurementSet, params: ImagingParams, kind: str) -> float:
    """Sharpened vote fraction at a single point for one dipole kind."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    values_mag, values_elec = indicator_values(
        np.asarray(z, dtype=float).reshape(1, 3), ms, params
    )
    return float(values_mag[0] if kind == MAGNETIC else values_elec[0])
