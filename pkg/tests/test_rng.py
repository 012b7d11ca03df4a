import numpy as np

from lapdual import rng


def test_partition_invariance():
    whole = rng.uniforms(12345, 0, 1000)
    parts = np.concatenate(
        [rng.uniforms(12345, 0, 137), rng.uniforms(12345, 137, 400), rng.uniforms(12345, 537, 463)]
    )
    assert np.array_equal(whole, parts)


def test_determinism_and_seed_sensitivity():
    a = rng.uniforms(1, 0, 256)
    b = rng.uniforms(1, 0, 256)
    c = rng.uniforms(2, 0, 256)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_range():
    u = rng.uniforms(9, 0, 10000)
    assert np.all(u >= 0.0) and np.all(u < 1.0)
    v = rng.uniforms_open(9, 0, 10000)
    assert np.all(v > 0.0) and np.all(v <= 1.0)


def test_uniform_moments():
    u = rng.uniforms(42, 0, 200000)
    assert abs(u.mean() - 0.5) < 0.005
    assert abs(u.var() - 1.0 / 12.0) < 0.005


def test_normals_are_standard():
    z = rng.standard_normals(7, 0, 100000)
    assert np.all(np.isfinite(z))
    assert abs(z.mean()) < 0.02
    assert abs(z.std() - 1.0) < 0.02


def test_large_seed_accepted():
    u = rng.uniforms(2**64 - 1, 0, 16)
    assert np.all(np.isfinite(u))
