"""Spatial operator, CFL control, time stepping, and envelopes."""

import numpy as np
import pytest
from scipy.integrate import quad

from landaulab.grid import Grid, gaussian, integrate, make_grid, spike
from landaulab.solver import (SolverConfig, SolverError, _apply_laplacian,
                              apply_diffusion, cfl_dt, identity_matrix_field,
                              moment_envelope, run, step,
                              theoretical_lp_envelope)


def random_spd_field(n, seed):
    rng = np.random.default_rng(seed)
    A = np.zeros((6, n, n, n))
    A[:3] = 1.0 + rng.random((3, n, n, n))
    A[3:] = 0.2 * rng.standard_normal((3, n, n, n))
    return A


def test_tendency_constant_zero():
    g = make_grid(16, 8.0)
    u = np.full((16,) * 3, 3.0)
    A = random_spd_field(16, 0)
    for scheme in ("minmod", "average"):
        assert np.allclose(apply_diffusion(g, u, A, scheme), 0.0, atol=1e-13)


def test_identity_reduces_to_laplacian():
    g = make_grid(16, 8.0)
    u = np.random.default_rng(1).random((16,) * 3)
    lap = _apply_laplacian(g, u)
    for scheme in ("minmod", "average"):
        out = apply_diffusion(g, u, identity_matrix_field(16), scheme)
        assert np.allclose(out, lap, atol=1e-12)
    # interior matches the standard 7-point stencil
    h2 = g.h**2
    i, j, k = 7, 8, 9
    expect = (u[i + 1, j, k] + u[i - 1, j, k] + u[i, j + 1, k]
              + u[i, j - 1, k] + u[i, j, k + 1] + u[i, j, k - 1]
              - 6 * u[i, j, k]) / h2
    assert lap[i, j, k] == pytest.approx(expect, rel=1e-12)


def test_tendency_sums_to_zero():
    g = make_grid(16, 8.0)
    u = np.random.default_rng(2).random((16,) * 3)
    A = random_spd_field(16, 3)
    for scheme in ("minmod", "average"):
        tend = apply_diffusion(g, u, A, scheme)
        assert abs(np.sum(tend)) <= 1e-13 * np.sum(np.abs(tend))


def test_apply_diffusion_validation():
    g = make_grid(16, 8.0)
    with pytest.raises(ValueError, match="shapes"):
        apply_diffusion(g, np.zeros((8,) * 3), identity_matrix_field(16))
    with pytest.raises(ValueError, match="scheme"):
        apply_diffusion(g, np.zeros((16,) * 3), identity_matrix_field(16),
                        "upwind")


def test_cfl_dt():
    ident = identity_matrix_field(8)
    assert cfl_dt(ident, 0.25, 0.5) == pytest.approx(0.5 * 0.0625 / 6.0)
    assert cfl_dt(2.0 * ident, 0.25, 0.5) == pytest.approx(cfl_dt(ident, 0.25, 0.5) / 2)
    assert cfl_dt(np.zeros((6, 8, 8, 8)), 0.25, 0.5, dt_max=0.7) == 0.7
    with pytest.raises(ValueError):
        cfl_dt(ident, 0.25, 1.5)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(T=-1.0)
    with pytest.raises(ValueError):
        SolverConfig(cfl=1.5)
    with pytest.raises(ValueError, match="mode"):
        SolverConfig(mode="implicit")
    with pytest.raises(ValueError, match="scheme"):
        SolverConfig(scheme="upwind")
    with pytest.raises(ValueError, match="refresh"):
        SolverConfig(refresh_every=0)
    with pytest.raises(ValueError, match="sample times"):
        SolverConfig(T=1.0, sample_times=(0.5, 0.25))


def test_step_zero_field():
    cfg = SolverConfig(n=16, L=8.0, T=1.0, mode="heat_baseline")
    g = make_grid(16, 8.0)
    u, rep = step(g, np.zeros((16,) * 3), None, cfg, dt=1e-3)
    assert np.all(u == 0) and rep.min_u == 0.0


def test_step_conserves_mass_and_detects_nan():
    cfg = SolverConfig(n=16, L=8.0, T=1.0, mode="heat_baseline")
    g = make_grid(16, 8.0)
    u = gaussian(g, 1.0, 1.0)
    u1, rep = step(g, u, None, cfg)
    assert abs(rep.mass_drift) < 1e-12
    bad = u.copy()
    bad[0, 0, 0] = np.nan
    with pytest.raises(SolverError, match="non-finite"):
        step(g, bad, None, cfg, dt=1e-3)


def test_run_single_record_for_tiny_T():
    cfg = SolverConfig(n=16, L=8.0, T=1e-5, mode="heat_baseline",
                       preset={"kind": "gaussian", "sigma": 1.0})
    traj = run(cfg)
    assert len(traj.records) == 1
    assert traj.records[0].t == pytest.approx(1e-5)


def test_run_heat_baseline_diagnostics():
    cfg = SolverConfig(n=24, L=12.0, T=0.2, mode="heat_baseline",
                       preset={"kind": "gaussian", "sigma": 1.0},
                       sample_times=(0.05, 0.1, 0.2), p_list=(2.0,),
                       m_list=(2.0,))
    traj = run(cfg)
    assert [r.t for r in traj.records] == pytest.approx([0.05, 0.1, 0.2])
    masses = [r.mass for r in traj.records]
    assert max(abs(m - masses[0]) / masses[0] for m in masses) < 1e-12
    ent = [r.entropy for r in traj.records]
    assert all(b <= a + 1e-8 * abs(a) for a, b in zip(ent, ent[1:]))
    lp = [r.lp[2.0] for r in traj.records]
    assert all(b <= a * (1 + 1e-8) for a, b in zip(lp, lp[1:]))


def test_heat_variance_growth():
    g = make_grid(32, 16.0)
    cfg = SolverConfig(n=32, L=16.0, T=0.25, mode="heat_baseline",
                       preset={"kind": "gaussian", "sigma": 1.0},
                       sample_times=(0.25,), store_fields_at=(0.25,))
    traj = run(cfg)
    _, u = traj.snapshots[0]
    m2 = integrate(g, u * g.radius2()) / integrate(g, u)
    # heat flow grows the second moment by 2 d t exactly
    assert m2 == pytest.approx(3.0 + 6 * 0.25, rel=2e-2)


def test_heat_order_of_accuracy():
    errs = []
    for n in (24, 48):
        g = make_grid(n, 12.0)
        cfg = SolverConfig(n=n, L=12.0, T=0.2, mode="heat_baseline",
                           cfl=0.3 if n == 24 else 0.3,
                           preset={"kind": "gaussian", "sigma": 1.0},
                           sample_times=(0.2,), store_fields_at=(0.2,))
        traj = run(cfg)
        _, u = traj.snapshots[0]
        exact = gaussian(g, 1.0, np.sqrt(1.0 + 2 * 0.2))
        errs.append(np.sqrt(integrate(g, (u - exact) ** 2)))
    assert errs[0] / errs[1] >= 3.5


def test_minmod_keeps_spike_nonnegative():
    cfg = SolverConfig(n=32, L=16.0, T=0.3,
                       preset={"kind": "spike", "mass": 50.0},
                       sample_times=(0.3,))
    traj = run(cfg)
    r = traj.records[-1]
    assert r.min_u >= -1e-12 * r.linf


def test_csv_header_and_determinism(tmp_path):
    cfg = SolverConfig(n=16, L=8.0, T=0.1, mode="heat_baseline",
                       preset={"kind": "gaussian", "sigma": 1.0},
                       sample_times=(0.05, 0.1), p_list=(2.0, 3.0),
                       m_list=(2.0,))
    traj = run(cfg)
    assert traj.csv_header() == ("t,mass,entropy,lp2,lp3,linf,l1m2,"
                                 "diss2,diss3,poincare_ratio,"
                                 "ellipticity_floor,min_u,dt")
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    traj.to_csv(p1)
    run(cfg).to_csv(p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_lp_envelope():
    assert theoretical_lp_envelope(2.0, 1.0, 1.0) == pytest.approx(
        np.sqrt(9.0 / 8.0))
    assert theoretical_lp_envelope(2.0, 2.0, 1.0) == pytest.approx(
        np.sqrt(2) * theoretical_lp_envelope(2.0, 1.0, 1.0))
    assert theoretical_lp_envelope(2.0, 1.0, 1e-8) > 1e3
    with pytest.raises(ValueError):
        theoretical_lp_envelope(1.0, 1.0, 1.0)


def test_moment_envelope():
    assert moment_envelope(2.5, 3.0, 0.0, 0.0) == 2.5
    # independent quadrature of the displayed closed form at c = C = 1
    direct, _ = quad(lambda s: np.exp(-3 * s ** (1.0 / 3.0)) * s ** (-1.0 / 3.0),
                     0.0, 1.0)
    expect = np.exp(3.0) * direct
    assert moment_envelope(0.0, 1.0, 1.0, 1.0) == pytest.approx(expect,
                                                                rel=1e-8)
    vals = [moment_envelope(1.0, t, 0.5, 0.5) for t in (0.0, 0.5, 1.0, 2.0)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
