import numpy as np
import pytest

from dipole_imaging import (
    FrequencyGrid,
    NoiseSpec,
    add_noise,
    axis_mixed_scene,
    fibonacci_directions,
    simulate_measurements,
)


@pytest.fixture(scope="module")
def clean_measurements():
    return simulate_measurements(
        axis_mixed_scene(), fibonacci_directions(8), FrequencyGrid(10.0, 25)
    )


def test_zero_delta_is_identity(clean_measurements):
    noisy = add_noise(clean_measurements, NoiseSpec(0.0, seed=7))
    assert np.array_equal(noisy.samples, clean_measurements.samples)
    assert noisy.samples is not clean_measurements.samples


@pytest.mark.parametrize("delta", [0.05, 0.1, 0.3])
def test_per_block_relative_error_equals_delta(clean_measurements, delta):
    noisy = add_noise(clean_measurements, NoiseSpec(delta, seed=3))
    for sign in (0, 1):
        for j in range(clean_measurements.grid.count):
            block = clean_measurements.samples[sign, :, j, :]
            perturbed = noisy.samples[sign, :, j, :]
            rel = np.linalg.norm(perturbed - block) / np.linalg.norm(block)
            assert rel == pytest.approx(delta, abs=1e-12)


def test_same_seed_reproduces_bitwise(clean_measurements):
    a = add_noise(clean_measurements, NoiseSpec(0.1, seed=11))
    b = add_noise(clean_measurements, NoiseSpec(0.1, seed=11))
    assert np.array_equal(a.samples, b.samples)


def test_different_seeds_differ(clean_measurements):
    a = add_noise(clean_measurements, NoiseSpec(0.1, seed=11))
    b = add_noise(clean_measurements, NoiseSpec(0.1, seed=12))
    assert not np.array_equal(a.samples, b.samples)


def test_blocks_draw_independent_noise(clean_measurements):
    noisy = add_noise(clean_measurements, NoiseSpec(0.1, seed=5))
    diff = noisy.samples - clean_measurements.samples
    # directions of the perturbation must differ across blocks
    a = diff[0, :, 0, :] / np.linalg.norm(diff[0, :, 0, :])
    b = diff[0, :, 1, :] / np.linalg.norm(diff[0, :, 1, :])
    c = diff[1, :, 0, :] / np.linalg.norm(diff[1, :, 0, :])
    assert np.linalg.norm(a - b) > 1e-3
    assert np.linalg.norm(a - c) > 1e-3


def test_rejects_negative_delta():
    with pytest.raises(ValueError):
        NoiseSpec(-0.1)


def test_input_is_not_mutated(clean_measurements):
    before = clean_measurements.samples.copy()
    add_noise(clean_measurements, NoiseSpec(0.2, seed=1))
    assert np.array_equal(before, clean_measurements.samples)
