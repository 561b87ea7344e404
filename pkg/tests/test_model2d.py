import numpy as np
import pytest
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from dnrate.discretization import build_fvm_blocks
from dnrate.dn1d import DNConfig, observed_rate
from dnrate.experiments import smooth_state_2d
from dnrate.materials import material_from, preset
from dnrate.model2d import (GridSpec2D, State2D, build_fem_2d, build_fvm_2d, dn_time_step_2d,
                            mode_rates, monolithic_step_2d, q1_assemble,
                            q1_element_matrices, tangential_modes)
from dnrate.theory import RateInputs, sigma_exact

AIR, STEEL, WATER = preset("air"), preset("steel"), preset("water")


def test_grid():
    g = GridSpec2D.from_dx(1 / 1100, 100)
    assert (g.nx1, g.nx2, g.ny) == (1099, 10, 10)
    assert g.height == pytest.approx(1.0)
    assert g.r == pytest.approx(100)
    assert GridSpec2D.from_dx(1 / 8, 2, ny=7).height == pytest.approx(2.0)
    with pytest.raises(ValueError):
        GridSpec2D(1, 3, 3)
    with pytest.raises(ValueError):
        GridSpec2D(3, 3, 0)


def test_q1_element_mass():
    me, ke = q1_element_matrices(1.0, alpha=36.0)
    expect = np.array([[4, 2, 1, 2], [2, 4, 2, 1], [1, 2, 4, 2], [2, 1, 2, 4]], dtype=float)
    assert np.array_equal(me, expect)
    assert me.sum() == pytest.approx(36.0)
    assert np.allclose(ke @ np.ones(4), 0)


def test_q1_element_mass_by_quadrature():
    # 2x2 Gauss rule integrates products of bilinear functions exactly
    g = np.array([-1, 1]) / np.sqrt(3)
    xs, ys = np.meshgrid((g + 1) / 2, (g + 1) / 2)
    xs, ys = xs.ravel(), ys.ravel()
    phi = np.stack([(1 - xs) * (1 - ys), xs * (1 - ys), xs * ys, (1 - xs) * ys])
    mass = 0.25 * phi @ phi.T
    assert np.allclose(q1_element_matrices(1.0)[0], mass, atol=1e-15)


def test_q1_assembly_is_tensor_product():
    nex, ney, h = 4, 3, 0.25
    mass, stiff = q1_assemble(nex, ney, h, 1.0, 1.0)

    def m1(n):
        d = np.full(n + 1, 4.0)
        d[[0, -1]] = 2.0
        return h / 6 * sp.diags([np.ones(n), d, np.ones(n)], [-1, 0, 1])

    def k1(n):
        d = np.full(n + 1, 2.0)
        d[[0, -1]] = 1.0
        return 1 / h * sp.diags([-np.ones(n), d, -np.ones(n)], [-1, 0, 1])

    mx, my, kx, ky = m1(nex), m1(ney), k1(nex), k1(ney)
    assert np.allclose(mass.toarray(), sp.kron(my, mx).toarray(), atol=1e-15)
    assert np.allclose(stiff.toarray(), (sp.kron(my, kx) + sp.kron(ky, mx)).toarray(), atol=1e-14)
    assert np.allclose(stiff @ np.ones(stiff.shape[0]), 0, atol=1e-13)


def test_fem_patch_test():
    # linear field with matching Dirichlet data is reproduced by one solve
    nex = ney = 6
    h = 1 / nex
    _, stiff = q1_assemble(nex, ney, h, 1.0, 1.0)
    xi, yj = np.meshgrid(np.arange(nex + 1) * h, np.arange(ney + 1) * h)
    u = (2.0 * xi - 3.0 * yj + 0.5).ravel()
    on_bnd = ((xi == 0) | (yj == 0) | np.isclose(xi, 1) | np.isclose(yj, 1)).ravel()
    inner = ~on_bnd
    k = stiff.tocsr()
    rhs = -k[inner][:, on_bnd] @ u[on_bnd]
    sol = spla.spsolve(k[inner][:, inner].tocsc(), rhs)
    assert np.allclose(sol, u[inner], atol=1e-12)


def test_fem_blocks_symmetric_pd():
    b = build_fem_2d(GridSpec2D(3, 4, 5), WATER)
    for blk in (b.m_ii, b.a_ii):
        d = blk.toarray()
        assert np.allclose(d, d.T)
        assert np.linalg.eigvalsh(d).min() > 0
    assert np.allclose(b.m_igamma.toarray(), b.m_gammai.T.toarray())


def test_fvm_uniform_state_zero_flux():
    g = GridSpec2D(2, 1, 1)
    b = build_fvm_2d(g, AIR)
    u = np.ones(b.n)
    gam = np.ones(1)
    res = b.stiffness_sign * (b.a_gammai @ u) + b.a_gammagamma @ gam
    # the one-sided difference of a constant vanishes
    assert np.allclose(res, 0, atol=1e-9 * b.a_gammagamma.max())


def test_fvm_linear_flux_all_rows():
    lam, c = 0.7, 1.3
    mat = material_from(lam, 1.0, 1.0)
    g = GridSpec2D(19, 4, 4)
    b = build_fvm_2d(g, mat)
    x = -1.0 + g.dx1 * np.arange(1, g.nx1 + 1)
    u = np.tile(c * x, g.ny)
    flux = -g.dx1 * (b.stiffness_sign * (b.a_gammai @ u) + b.a_gammagamma @ np.zeros(g.ny))
    assert np.allclose(flux, -lam * c, rtol=1e-12)


def test_fvm_single_row_reduces_to_1d():
    g = GridSpec2D(6, 2, 1)
    b2 = build_fvm_2d(g, AIR)
    b1 = build_fvm_blocks(g.grid1d(), AIR)
    ky = AIR.lam / g.dx2**2
    # ny = 1: only the tangential Dirichlet neighbours add -2 ky on the diagonal
    expect = b1.a_ii.to_dense() - 2 * ky * np.eye(6)
    assert np.allclose(b2.a_ii.toarray(), expect)
    assert np.allclose(b2.a_gammai.toarray().ravel(), b1.a_gammai)
    assert np.allclose(b2.a_igamma.toarray().ravel(), b1.a_igamma)


def test_monolithic_energy_decay():
    g = GridSpec2D(15, 7, 7)
    b1, b2 = build_fvm_2d(g, AIR), build_fem_2d(g, STEEL)
    rng = np.random.default_rng(0)
    state = State2D(rng.normal(size=b1.n), rng.normal(size=b2.n), rng.normal(size=g.ny))
    for dt in (1e-3, 1.0, 1e3):
        new = monolithic_step_2d(b1, b2, dt, state)
        e_old = _energy(b1, b2, state)
        e_new = _energy(b1, b2, new)
        assert e_new <= e_old * (1 + 1e-12)


def _energy(b1, b2, s):
    e1 = s.u1 @ (b1.m_ii @ s.u1)
    full2 = sp.bmat([[b2.m_ii, b2.m_igamma], [b2.m_gammai, b2.m_gammagamma]])
    v2 = np.concatenate([s.u2, s.u_gamma])
    return e1 + v2 @ (full2 @ v2)


def test_dn_matches_monolithic_2d():
    g = GridSpec2D.from_dx(1 / 64, 4)
    b1, b2 = build_fvm_2d(g, AIR), build_fem_2d(g, STEEL)
    state = smooth_state_2d(g)
    for dt in (0.1, 10.0):
        new, trace = dn_time_step_2d(b1, b2, DNConfig(dt=dt), state)
        mono = monolithic_step_2d(b1, b2, dt, state)
        assert trace.converged
        assert np.linalg.norm(new.flat() - mono.flat()) <= 10 * 1e-10 * (1 + np.linalg.norm(mono.flat()))


def test_tangential_modes():
    g = GridSpec2D(3, 3, 3)
    m, k = tangential_modes(g, np.arange(1, 4))
    assert np.all((m > 1 / 3) & (m < 1))
    assert np.all(np.diff(k) > 0)


@pytest.mark.parametrize("mats,dx1,r,dt", [((AIR, STEEL), 1 / 1100, 100, 40 / 39),
                                           ((AIR, WATER), 1 / 128, 1, 5.0),
                                           ((WATER, STEEL), 1 / 64, 2, 1.0)])
def test_single_mode_rate_matches_mode_oracle(mats, dx1, r, dt):
    g = GridSpec2D.from_dx(dx1, r)
    b1, b2 = build_fvm_2d(g, mats[0]), build_fem_2d(g, mats[1])
    _, trace = dn_time_step_2d(b1, b2, DNConfig(dt=dt, initial_interface=0.0), smooth_state_2d(g))
    expect = mode_rates(g, *mats, dt)[0]
    assert observed_rate(trace) == pytest.approx(expect, rel=1e-6)


def test_update_ratios_bounded_by_worst_mode():
    # the iteration is diagonal in the orthogonal sine basis, so no update
    # can shrink more slowly than the largest mode factor
    g = GridSpec2D.from_dx(1 / 128, 4, ny=7)
    worst = mode_rates(g, AIR, STEEL, 1.0).max()
    b1, b2 = build_fvm_2d(g, AIR), build_fem_2d(g, STEEL)
    rng = np.random.default_rng(1)
    state = State2D(rng.normal(size=b1.n), rng.normal(size=b2.n), rng.normal(size=g.ny))
    cfg = DNConfig(dt=1.0, tol=1e-13, initial_interface=0.0)
    _, trace = dn_time_step_2d(b1, b2, cfg, state)
    norms = np.array(trace.update_norms)
    assert trace.converged
    assert np.all(norms[1:] <= worst * norms[:-1] * (1 + 1e-6) + 1e-14)


def test_air_water_large_aspect_ratio():
    g = GridSpec2D.from_dx(1 / 10000, 1000)
    b1, b2 = build_fvm_2d(g, AIR), build_fem_2d(g, WATER)
    _, trace = dn_time_step_2d(b1, b2, DNConfig(dt=10.0, initial_interface=0.0), smooth_state_2d(g))
    rate = observed_rate(trace)
    sigma = sigma_exact(RateInputs.build(10.0, g.grid1d(), AIR, WATER))
    assert rate < 1
    assert abs(rate / sigma - 1) <= 0.10


@pytest.mark.parametrize("mats,dx1,r", [((AIR, STEEL), 1 / 1100, 100), ((AIR, STEEL), 1 / 128, 1),
                                        ((WATER, STEEL), 1 / 128, 1)])
def test_lowest_mode_approaches_1d_as_ny_grows(mats, dx1, r):
    # with dx2 fixed, ny sets the strip height (ny + 1) dx2; the lowest mode
    # carries a tangential reaction ~ (pi / H)^2 that fades as ny grows
    sigma = sigma_exact(RateInputs.build(10.0, GridSpec2D.from_dx(dx1, r).grid1d(), *mats))
    gaps = [abs(mode_rates(GridSpec2D.from_dx(dx1, r, ny=ny), *mats, 10.0)[0] / sigma - 1)
            for ny in (16, 32, 64)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 0.02
