"""Grid geometry, presets, discrete calculus, and snapshot round trips."""

import numpy as np
import pytest

from landaulab.grid import (SnapshotError, boundary_mass_fraction, gaussian,
                            gradient, integrate, load_snapshot, make_grid,
                            random_bumps, sample_preset, save_snapshot, spike,
                            two_bumps)


def test_make_grid_basic():
    g = make_grid(8, 8.0)
    assert g.h == 1.0
    assert g.axis[0] == -3.5
    assert make_grid(64, 16.0).h == 0.25


def test_make_grid_rejects_bad_input():
    with pytest.raises(ValueError, match="even"):
        make_grid(7, 8.0)
    with pytest.raises(ValueError):
        make_grid(4, 8.0)
    with pytest.raises(ValueError):
        make_grid(16, -1.0)


def test_integrate_examples():
    g = make_grid(16, 8.0)
    assert integrate(g, np.zeros((16,) * 3)) == 0.0
    assert integrate(g, np.full((16,) * 3, 2.0)) == pytest.approx(1024.0)


def test_integrate_linear():
    g = make_grid(16, 8.0)
    rng = np.random.default_rng(3)
    f, h = rng.random((16,) * 3), rng.random((16,) * 3)
    lhs = integrate(g, 2.0 * f + 3.0 * h)
    assert lhs == pytest.approx(2 * integrate(g, f) + 3 * integrate(g, h),
                                rel=1e-13)


def test_gaussian_mass():
    g = make_grid(64, 16.0)
    u = gaussian(g, 1.0, 1.0)
    assert abs(integrate(g, u) - 1.0) < 1e-3
    assert np.all(u >= 0)


def test_gradient_exact_for_linear():
    g = make_grid(16, 8.0)
    x, _, _ = g.mesh()
    f = np.broadcast_to(x, (16,) * 3).copy()
    grad = gradient(g, f)
    assert np.allclose(grad[0], 1.0, atol=1e-12)
    assert np.allclose(grad[1], 0.0, atol=1e-12)
    assert np.allclose(gradient(g, np.full((16,) * 3, 5.0)), 0.0, atol=1e-13)


def test_gradient_second_order():
    errs = []
    for n in (32, 64):
        g = make_grid(n, 16.0)
        u = gaussian(g, 1.0, 1.5)
        x, y, z = g.mesh()
        exact = -x / 1.5**2 * u
        errs.append(np.max(np.abs(gradient(g, u)[0] - exact)))
    assert errs[0] / errs[1] > 3.5


def test_boundary_mass_fraction():
    g = make_grid(32, 16.0)
    assert boundary_mass_fraction(g, gaussian(g, 1.0, 1.0), 4) < 1e-8
    const = np.ones((32,) * 3)
    frac = boundary_mass_fraction(g, const, 8)
    assert frac == pytest.approx(1.0 - (16 / 32) ** 3)
    assert boundary_mass_fraction(g, np.zeros((32,) * 3), 4) == 0.0
    with pytest.raises(ValueError):
        boundary_mass_fraction(g, const, 8 + 1)


def test_presets():
    g = make_grid(32, 16.0)
    assert np.array_equal(random_bumps(g, seed=7), random_bumps(g, seed=7))
    s = spike(g, mass=1.0)
    assert s.max() == s[16, 16, 16] or s.max() == s[15, 15, 15]
    assert integrate(g, two_bumps(g, 1.0, 1.0, 4.0)) == pytest.approx(1.0,
                                                                      abs=1e-3)
    with pytest.raises(ValueError, match="under-resolved"):
        gaussian(g, 1.0, 0.5 * g.h)
    with pytest.raises(ValueError, match="half-box"):
        gaussian(g, 1.0, 1.0, center=(7.0, 0.0, 0.0))


def test_sample_preset_dispatch():
    g = make_grid(32, 16.0)
    u = sample_preset(g, {"kind": "gaussian", "mass": 2.0, "sigma": 1.0})
    assert integrate(g, u) == pytest.approx(2.0, abs=2e-3)
    with pytest.raises(ValueError, match="unknown preset"):
        sample_preset(g, {"kind": "cube"})


def test_radial_preset_rotation_invariance():
    g = make_grid(32, 16.0)
    u = gaussian(g, 1.0, 1.0)
    # discrete 90-degree rotations are axis permutations and flips
    assert np.array_equal(u, np.transpose(u, (1, 0, 2)))
    assert np.array_equal(u, np.transpose(u, (2, 1, 0)))
    assert np.array_equal(u, u[::-1, :, :])


def test_snapshot_roundtrip(tmp_path):
    g = make_grid(16, 8.0)
    u = random_bumps(g, seed=1)
    path = tmp_path / "u.bin"
    save_snapshot(g, u, path, time=0.5, name="u")
    g2, u2, meta = load_snapshot(path, expect_grid=g)
    assert np.array_equal(u, u2)
    assert g2 == g
    assert meta["time"] == 0.5
    assert meta["byte_order"] == "LE" and meta["dtype"] == "f64"


def test_snapshot_corruption(tmp_path):
    g = make_grid(16, 8.0)
    path = tmp_path / "u.bin"
    save_snapshot(g, random_bumps(g, seed=2), path)
    raw = bytearray(path.read_bytes())
    raw[100] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(SnapshotError, match="checksum"):
        load_snapshot(path)


def test_snapshot_grid_mismatch(tmp_path):
    g = make_grid(16, 8.0)
    path = tmp_path / "u.bin"
    save_snapshot(g, random_bumps(g, seed=2), path)
    with pytest.raises(SnapshotError, match="grid"):
        load_snapshot(path, expect_grid=make_grid(32, 8.0))
