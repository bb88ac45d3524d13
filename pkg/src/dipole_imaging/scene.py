"""Ground-truth dipole configurations and truth-vs-reconstruction metrics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAGNETIC = "magnetic"
ELECTRIC = "electric"
KINDS = (MAGNETIC, ELECTRIC)

#: Two dipoles closer than this are considered coincident.
MIN_SEPARATION = 1e-9


@dataclass
class Dipole:
    """Point dipole: kind, location in R^3 and complex polarization strength q.

    Only the product q = tau * p of amplitude and unit polarization is
    observable from far-field data, so the factors are not stored
    separately (the decomposition is ambiguous up to a complex unit).
    """

    kind: str
    location: np.ndarray
    strength: np.ndarray

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"dipole kind must be one of {KINDS}, got {self.kind!r}")
        self.location = np.asarray(self.location, dtype=float).reshape(3)
        self.strength = np.asarray(self.strength, dtype=complex).reshape(3)
        if not np.all(np.isfinite(self.location)):
            raise ValueError("dipole location must be finite")
        if not np.all(np.isfinite(self.strength)):
            raise ValueError("dipole strength must be finite")
        if np.linalg.norm(self.strength) == 0.0:
            raise ValueError("a zero-strength dipole is not a dipole")


@dataclass
class Scene:
    """An array of dipoles at pairwise distinct locations."""

    dipoles: list[Dipole]

    def __post_init__(self):
        locs = self.locations()
        for i in range(len(locs)):
            for j in range(i + 1, len(locs)):
                if np.linalg.norm(locs[i] - locs[j]) <= MIN_SEPARATION:
                    raise ValueError(f"dipoles {i} and {j} share a location")

    def locations(self) -> np.ndarray:
        return np.array([d.location for d in self.dipoles]).reshape(-1, 3)

    @property
    def magnetic(self) -> list[Dipole]:
        return [d for d in self.dipoles if d.kind == MAGNETIC]

    @property
    def electric(self) -> list[Dipole]:
        return [d for d in self.dipoles if d.kind == ELECTRIC]

    @property
    def total_count(self) -> int:
        return len(self.dipoles)

    @property
    def magnetic_count(self) -> int:
        return len(self.magnetic)


def relative_error(q_true, q_rec) -> float:
    """|q_rec - q_true| / |q_true| with Euclidean norms over complex 3-vectors."""
    q_true = np.asarray(q_true, dtype=complex).reshape(3)
    q_rec = np.asarray(q_rec, dtype=complex).reshape(3)
    denom = np.linalg.norm(q_true)
    if denom == 0.0:
        raise ValueError("q_true must be nonzero")
    return float(np.linalg.norm(q_rec - q_true) / denom)


@dataclass
class MatchedPair:
    truth_index: int
    recovered_index: int
    location_error: float
    kind_correct: bool
    strength_relative_error: float


@dataclass
class MatchReport:
    """Greedy pairing of truth dipoles with recovered ones."""

    matches: list[MatchedPair] = field(default_factory=list)
    missed: list[int] = field(default_factory=list)
    spurious: list[int] = field(default_factory=list)

    @property
    def all_matched(self) -> bool:
        return not self.missed and not self.spurious


def match_report(truth: Scene, report, radius: float) -> MatchReport:
    """Pair each truth dipole with the nearest recovered dipole within radius.

    `report` is anything with a `.dipoles` list of objects carrying `kind`,
    `location` and `strength`. Pairing is greedy on distance (globally
    closest pair first) and ignores kind; type correctness is recorded per
    pair. Unpaired truth dipoles are flagged missed, unpaired recovered
    dipoles spurious.
    """
    if not radius > 0:
        raise ValueError("matching radius must be positive")
    recovered = list(report.dipoles)
    n_truth, n_rec = len(truth.dipoles), len(recovered)
    result = MatchReport()
    open_truth = set(range(n_truth))
    open_rec = set(range(n_rec))
    if n_truth and n_rec:
        dist = np.full((n_truth, n_rec), np.inf)
        for i, d in enumerate(truth.dipoles):
            for j, r in enumerate(recovered):
                dist[i, j] = np.linalg.norm(d.location - np.asarray(r.location, dtype=float))
        while open_truth and open_rec:
            i, j = np.unravel_index(int(np.argmin(dist)), dist.shape)
            if dist[i, j] > radius:
                break
            d, r = truth.dipoles[i], recovered[j]
            result.matches.append(
                MatchedPair(
                    truth_index=i,
                    recovered_index=j,
                    location_error=float(dist[i, j]),
                    kind_correct=(d.kind == r.kind),
                    strength_relative_error=relative_error(d.strength, r.strength),
                )
            )
            open_truth.discard(i)
            open_rec.discard(j)
            dist[i, :] = np.inf
            dist[:, j] = np.inf
    result.missed = sorted(open_truth)
    result.spurious = sorted(open_rec)
    return result
