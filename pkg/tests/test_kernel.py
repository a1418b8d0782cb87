"""Kernel sampling, convolution identities, oracle agreement, eigenvalues."""

import numpy as np
import pytest

from landaulab.grid import gaussian, gradient, make_grid, random_bumps
from landaulab.kernel import (DEFAULT_C_D, ConvolutionPlan, KernelTable,
                              build_kernel_table, compute_A, compute_divA,
                              ellipticity_profile, newtonian_potential,
                              origin_regularization, quadrature_oracle_A,
                              sym3_eigvals)


@pytest.fixture(scope="module")
def grid32():
    return make_grid(32, 16.0)


@pytest.fixture(scope="module")
def table32(grid32):
    return build_kernel_table(grid32)


def test_origin_regularization():
    reg = origin_regularization(0.5)
    r_eff = 0.5 * (3.0 / (4.0 * np.pi)) ** (1.0 / 3.0)
    assert reg["r_eff"] == pytest.approx(r_eff)
    assert reg["newtonian"] == pytest.approx(1.5 / r_eff)
    assert reg["matrix_diag"] == pytest.approx(2.0 / 3.0 * 1.5 / r_eff)
    assert reg["matrix_offdiag"] == 0.0 and reg["odd"] == 0.0


def test_kernel_samples_projection_algebra(table32):
    h = table32.grid.h
    # displacement z = (a, 0, 0) sits at index (m, 0, 0), a = m*h
    p11 = table32._sample("P11")
    p22 = table32._sample("P22")
    p33 = table32._sample("P33")
    p12 = table32._sample("P12")
    m = 5
    a = m * h
    assert p11[m, 0, 0] == pytest.approx(0.0, abs=1e-15)
    assert p22[m, 0, 0] == pytest.approx(1.0 / a)
    assert p12[m, 0, 0] == 0.0
    assert p11[0, m, 0] == pytest.approx(1.0 / a)
    # trace equals (d-1)/|z| off the origin
    tr = p11[m, 3, 1] + p22[m, 3, 1] + p33[m, 3, 1]
    r = h * np.sqrt(m**2 + 9 + 1)
    assert tr == pytest.approx(2.0 / r)


def test_zero_field(grid32, table32):
    z = np.zeros((32,) * 3)
    assert np.all(compute_A(z, table32) == 0)
    assert np.all(compute_divA(z, table32) == 0)
    assert np.all(newtonian_potential(z, table32) == 0)
    assert np.all(quadrature_oracle_A(z, grid32, [(1, 2, 3)]) == 0)


def test_trace_identity(grid32, table32):
    u = gaussian(grid32, 1.0, 1.0)
    A = compute_A(u, table32)
    trace = A[0] + A[1] + A[2]
    rhs = 2.0 * table32.c_d * newtonian_potential(u, table32)
    assert np.linalg.norm(trace - rhs) / np.linalg.norm(rhs) < 1e-10


def test_oracle_same_grid_agreement(grid32, table32):
    # on the same grid the spectral convolution and the direct sum are the
    # same discrete operation, so agreement is machine precision
    u = random_bumps(grid32, seed=5)
    pts = [(16, 16, 16), (10, 20, 7), (25, 5, 30)]
    A = compute_A(u, table32)
    approx = np.array([[A[c][i, j, k] for c in range(6)] for i, j, k in pts])
    ref = quadrature_oracle_A(u, grid32, pts)
    assert np.max(np.abs(approx - ref)) < 1e-12 * np.max(np.abs(ref))


def test_psd_floor(grid32, table32):
    u = gaussian(grid32, 1.0, 1.0)
    lam = sym3_eigvals(compute_A(u, table32))
    assert np.min(lam[0]) >= -1e-12 * np.max(lam[2])


def test_divergence_identity(grid32, table32):
    # the two paths differ by the discrete-gradient truncation error;
    # ~3.3e-3 at n=32, under 1e-3 at the n=64 acceptance resolution
    u = gaussian(grid32, 1.0, 2.5)
    divA = compute_divA(u, table32)
    alt = 2.0 * table32.c_d * gradient(grid32,
                                       newtonian_potential(u, table32))
    assert np.linalg.norm(divA - alt) / np.linalg.norm(alt) < 5e-3


def test_divA_radial_alignment(grid32, table32):
    u = gaussian(grid32, 1.0, 1.5)
    divA = compute_divA(u, table32)
    x, y, z = grid32.mesh()
    cross = np.stack([divA[1] * z - divA[2] * y,
                      divA[2] * x - divA[0] * z,
                      divA[0] * y - divA[1] * x])
    scale = np.sqrt(grid32.radius2()) * np.sqrt(np.sum(divA**2, axis=0))
    mask = scale > 1e-12 * scale.max()
    rel = np.sqrt(np.sum(cross**2, axis=0))[mask] / scale[mask]
    # the cubic grid is only approximately rotation-equivariant, so the
    # field aligns with x up to the O(h^2) anisotropy of the stencil
    assert np.max(rel) < 1e-3


def test_mass_scaling_linearity(grid32, table32):
    u = gaussian(grid32, 1.0, 1.0)
    A1 = compute_A(u, table32)
    A3 = compute_A(3.0 * u, table32)
    assert np.allclose(A3, 3.0 * A1, rtol=1e-12, atol=1e-15)


def test_sym3_eigvals_matches_lapack():
    rng = np.random.default_rng(11)
    comp = rng.normal(size=(6, 40))
    lam = sym3_eigvals(comp)
    for i in range(40):
        a11, a22, a33, a12, a13, a23 = comp[:, i]
        M = np.array([[a11, a12, a13], [a12, a22, a23], [a13, a23, a33]])
        ref = np.linalg.eigvalsh(M)
        assert np.allclose(lam[:, i], ref, atol=1e-12)
    iso = sym3_eigvals(np.array([2.0, 2.0, 2.0, 0.0, 0.0, 0.0]))
    assert np.allclose(iso, 2.0)


def test_ellipticity_profile(grid32):
    n = grid32.n
    ident = np.zeros((6, n, n, n))
    ident[:3] = 1.0
    floor, cell = ellipticity_profile(ident, grid32)
    assert floor == pytest.approx(np.min(grid32.bracket(3.0)))
    zero = np.zeros((6, n, n, n))
    assert ellipticity_profile(zero, grid32)[0] == 0.0


def test_ellipticity_positive_for_mass(grid32, table32):
    A = compute_A(gaussian(grid32, 1.0, 1.0), table32)
    assert ellipticity_profile(A, grid32)[0] > 0.0


def test_plan_table_mismatch(grid32, table32):
    other = build_kernel_table(make_grid(16, 16.0))
    plan = ConvolutionPlan(other)
    with pytest.raises(ValueError, match="different kernel table"):
        compute_A(np.zeros((32,) * 3), table32, plan)


def test_bad_cd():
    with pytest.raises(ValueError, match="positive"):
        KernelTable(make_grid(16, 8.0), c_d=0.0)


def test_default_cd():
    assert DEFAULT_C_D == pytest.approx(1.0 / (8.0 * np.pi))
