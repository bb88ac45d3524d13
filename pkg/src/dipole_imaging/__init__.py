"""Forward and inverse toolkit for mixed magnetic/electric dipole arrays.

Simulates multi-frequency electric far-field patterns at sparse observation
directions and reconstructs dipole locations, kinds and complex polarization
strengths via band-limited decoupling integrals, thresholded direction-vote
indicators and closed-form strength formulas.
"""

from .forward import (
    FrequencyGrid,
    MeasurementSet,
    far_field_electric,
    far_field_magnetic,
    far_field_scene,
    simulate_measurements,
    suggest_node_count,
)
from .geometry import (
    DirectionSet,
    fibonacci_directions,
    no_three_coplanar,
    planar_directions,
    triple_product,
)
from .imaging import (
    ImagingParams,
    band_integral_electric,
    band_integral_magnetic,
    band_integrals,
    cutoff,
    indicator,
    indicator_values,
)
from .localization import IndicatorField, SamplingGrid, evaluate_field, extract_peaks
from .noise import NoiseSpec, add_noise
from .oracle import (
    PlaneArrangement,
    count_planes,
    count_planes_planar,
    required_directions_full_space,
    required_directions_in_plane,
)
from .sample_scenes import axis_mixed_scene, planar_array_scene
from .scene import (
    ELECTRIC,
    MAGNETIC,
    Dipole,
    MatchReport,
    Scene,
    match_report,
    relative_error,
)
from .strengths import (
    DegenerateData,
    NoAdmissiblePair,
    ReconstructionReport,
    RecoveredDipole,
    SingularSystem,
    recover_single_dipole_location,
    recover_single_dipole_strength_fixed_k,
    recover_strength_electric,
    recover_strength_magnetic,
    select_pair,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateData",
    "Dipole",
    "DirectionSet",
    "ELECTRIC",
    "FrequencyGrid",
    "ImagingParams",
    "IndicatorField",
    "MAGNETIC",
    "MatchReport",
    "MeasurementSet",
    "NoAdmissiblePair",
    "NoiseSpec",
    "PlaneArrangement",
    "ReconstructionReport",
    "RecoveredDipole",
    "SamplingGrid",
    "Scene",
    "SingularSystem",
    "add_noise",
    "axis_mixed_scene",
    "band_integral_electric",
    "band_integral_magnetic",
    "band_integrals",
    "count_planes",
    "count_planes_planar",
    "cutoff",
    "evaluate_field",
    "extract_peaks",
    "far_field_electric",
    "far_field_magnetic",
    "far_field_scene",
    "fibonacci_directions",
    "indicator",
    "indicator_values",
    "match_report",
    "no_three_coplanar",
    "planar_array_scene",
    "planar_directions",
    "recover_single_dipole_location",
    "recover_single_dipole_strength_fixed_k",
    "recover_strength_electric",
    "recover_strength_magnetic",
    "relative_error",
    "required_directions_full_space",
    "required_directions_in_plane",
    "select_pair",
    "simulate_measurements",
    "suggest_node_count",
    "triple_product",
]
