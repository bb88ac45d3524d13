import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dipole_imaging import (
    Dipole,
    ReconstructionReport,
    RecoveredDipole,
    Scene,
    match_report,
    relative_error,
)

finite = st.floats(min_value=-3, max_value=3, allow_nan=False)


def complex_vectors():
    return st.tuples(*(st.tuples(finite, finite) for _ in range(3))).map(
        lambda t: np.array([complex(re, im) for re, im in t])
    )


class TestRelativeError:
    def test_equal_vectors_give_zero(self):
        q = np.array([1.0, 2.0, -1.0 + 0.5j])
        assert relative_error(q, q) == 0.0

    def test_ten_percent_offset(self):
        assert relative_error([1, 0, 0], [1.1, 0, 0]) == pytest.approx(0.1)

    def test_reference_reconstruction_error(self):
        q_true = np.array([1.0, 1.0, -1.0])
        q_rec = np.array([1.02 + 0.00j, 1.00 + 0.02j, -1.01 - 0.04j])
        assert relative_error(q_true, q_rec) == pytest.approx(0.0289, abs=5e-4)

    def test_rejects_zero_reference(self):
        with pytest.raises(ValueError):
            relative_error([0, 0, 0], [1, 0, 0])

    @given(
        complex_vectors(),
        complex_vectors(),
        st.tuples(finite, finite).map(lambda t: complex(*t)),
    )
    def test_scale_covariance(self, q_true, q_rec, alpha):
        if np.linalg.norm(q_true) < 1e-3 or abs(alpha) < 1e-3:
            return
        assert relative_error(alpha * q_true, alpha * q_rec) == pytest.approx(
            relative_error(q_true, q_rec), rel=1e-9, abs=1e-12
        )


class TestSceneValidation:
    def test_zero_strength_rejected(self):
        with pytest.raises(ValueError, match="not a dipole"):
            Dipole("magnetic", (0, 0, 0), (0, 0, 0))

    def test_bad_kind_rejected(self):
        with pytest.raises(ValueError, match="kind"):
            Dipole("gravitational", (0, 0, 0), (1, 0, 0))

    def test_coincident_locations_rejected(self):
        with pytest.raises(ValueError, match="share a location"):
            Scene(
                [
                    Dipole("magnetic", (0, 0, 0), (1, 0, 0)),
                    Dipole("electric", (0, 0, 0), (0, 1, 0)),
                ]
            )

    def test_counts(self):
        scene = Scene(
            [
                Dipole("magnetic", (0, 0, 0), (1, 0, 0)),
                Dipole("electric", (1, 0, 0), (0, 1, 0)),
                Dipole("magnetic", (0, 1, 0), (0, 0, 1j)),
            ]
        )
        assert scene.total_count == 3
        assert scene.magnetic_count == 2
        assert len(scene.electric) == 1


def _report_from_scene(scene):
    return ReconstructionReport(
        dipoles=[
            RecoveredDipole(d.kind, d.location, d.strength, (0, 1), 100.0)
            for d in scene.dipoles
        ]
    )


class TestMatchReport:
    def test_identical_scenes_all_match(self):
        scene = Scene(
            [
                Dipole("magnetic", (0, 0, 0), (1, 1, 0)),
                Dipole("electric", (1, 0, 0), (0, 1j, 0)),
            ]
        )
        result = match_report(scene, _report_from_scene(scene), radius=1e-9)
        assert result.all_matched
        assert all(m.location_error == 0.0 for m in result.matches)
        assert all(m.strength_relative_error == 0.0 for m in result.matches)
        assert all(m.kind_correct for m in result.matches)

    def test_empty_report_flags_missed(self):
        scene = Scene([Dipole("magnetic", (0, 0, 0), (1, 0, 0))])
        result = match_report(scene, ReconstructionReport(), radius=0.5)
        assert result.missed == [0]
        assert result.spurious == []
        assert not result.matches

    def test_extra_recovered_flags_spurious(self):
        scene = Scene([Dipole("magnetic", (0, 0, 0), (1, 0, 0))])
        report = ReconstructionReport(
            dipoles=[
                RecoveredDipole("magnetic", (0.01, 0, 0), (1, 0, 0), (0, 1), 100.0),
                RecoveredDipole("electric", (5, 5, 5), (1, 0, 0), (0, 1), 100.0),
            ]
        )
        result = match_report(scene, report, radius=0.1)
        assert len(result.matches) == 1
        assert result.spurious == [1]
        assert result.matches[0].location_error == pytest.approx(0.01)

    def test_pairing_is_nearest_first(self):
        scene = Scene(
            [
                Dipole("magnetic", (0, 0, 0), (1, 0, 0)),
                Dipole("magnetic", (1, 0, 0), (1, 0, 0)),
            ]
        )
        report = ReconstructionReport(
            dipoles=[
                RecoveredDipole("magnetic", (0.4, 0, 0), (1, 0, 0), (0, 1), 100.0),
            ]
        )
        result = match_report(scene, report, radius=1.0)
        assert len(result.matches) == 1
        assert result.matches[0].truth_index == 0
        assert result.missed == [1]

    def test_kind_mismatch_recorded(self):
        scene = Scene([Dipole("magnetic", (0, 0, 0), (1, 0, 0))])
        report = ReconstructionReport(
            dipoles=[RecoveredDipole("electric", (0, 0, 0), (1, 0, 0), (0, 1), 100.0)]
        )
        result = match_report(scene, report, radius=0.1)
        assert not result.matches[0].kind_correct

    def test_rejects_nonpositive_radius(self):
        scene = Scene([Dipole("magnetic", (0, 0, 0), (1, 0, 0))])
        with pytest.raises(ValueError):
            match_report(scene, ReconstructionReport(), radius=0.0)
