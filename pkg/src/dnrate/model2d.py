"""2D model problem: FVM on [-1, 0] x [0, H], bilinear FEM on [0, 1] x [0, H].

The FVM grid has ``dx1 x dx2`` cells (aspect ratio ``r = dx2 / dx1``), the
FEM grid ``dx2 x dx2`` squares, and both share the ``ny`` interface nodes
``y_j = j * dx2``.  The height is ``H = (ny + 1) * dx2``, the unit square
when ``ny = 1/dx2 - 1``.  All outer boundaries carry homogeneous Dirichlet
data.

Scaling mirrors the 1D blocks: FVM rows are cell balances per unit area,
FEM rows are the weak form divided by ``dx2**2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .discretization import GridSpec1D, _cells_for, build_fem_blocks, build_fvm_blocks, step_blocks
from .dn1d import DNConfig, _initial_gamma, dn_iterate
from .materials import Material
from .tridiag import SingularMatrixError, TridiagonalFactor


@dataclass(frozen=True)
class GridSpec2D:
    nx1: int
    nx2: int
    ny: int

    def __post_init__(self):
        if self.nx1 < 2 or self.nx2 < 1 or self.ny < 1:
            raise ValueError(f"degenerate grid {self}")

    @property
    def dx1(self) -> float:
        return 1.0 / (self.nx1 + 1)

    @property
    def dx2(self) -> float:
        return 1.0 / (self.nx2 + 1)

    @property
    def r(self) -> float:
        return self.dx2 / self.dx1

    @property
    def height(self) -> float:
        return (self.ny + 1) * self.dx2

    @classmethod
    def from_dx(cls, dx1: float, r: float = 1.0, ny: int | None = None) -> "GridSpec2D":
        """Grid with normal width ``dx1`` on the FVM side and ``dx2 = r dx1``.

        ``ny`` defaults to the unit square.
        """
        nx1 = _cells_for(dx1)
        nx2 = _cells_for(r * dx1)
        return cls(nx1, nx2, nx2 if ny is None else ny)

    def grid1d(self) -> GridSpec1D:
        return GridSpec1D(self.nx1, self.nx2)


@dataclass(frozen=True)
class Blocks2D:
    """Sparse counterpart of :class:`~dnrate.discretization.SubdomainBlocks`."""

    kind: str
    m_ii: sp.csr_matrix
    a_ii: sp.csr_matrix
    m_igamma: sp.csr_matrix
    a_igamma: sp.csr_matrix
    m_gammai: sp.csr_matrix
    a_gammai: sp.csr_matrix
    m_gammagamma: sp.csr_matrix
    a_gammagamma: sp.csr_matrix
    stiffness_sign: float

    @property
    def n(self) -> int:
        return self.m_ii.shape[0]

    def step(self, dt):
        """``(K_ii, K_ig, K_gi, K_gg)`` of ``M + dt A`` (sign handling as in 1D)."""
        s = self.stiffness_sign
        return (
            (self.m_ii + s * dt * self.a_ii).tocsc(),
            (self.m_igamma + s * dt * self.a_igamma).tocsr(),
            (self.m_gammai + s * dt * self.a_gammai).tocsr(),
            (self.m_gammagamma + dt * self.a_gammagamma).tocsr(),
        )


def _second_difference(n: int) -> sp.csr_matrix:
    return sp.diags([np.ones(n - 1), -2.0 * np.ones(n), np.ones(n - 1)], [-1, 0, 1], format="csr")


def build_fvm_2d(grid: GridSpec2D, mat1: Material) -> Blocks2D:
    """Five-point cell balances; FVM unknowns are ordered ``j * nx1 + i``.

    Uses the negative definite sign convention of the 1D FVM blocks. The
    interface row of node ``j`` is the one-sided normal difference on row
    ``j`` alone.
    """
    n, ny = grid.nx1, grid.ny
    lam, alpha = mat1.lam, mat1.alpha
    kx, ky = lam / grid.dx1**2, lam / grid.dx2**2
    iy, ix = sp.identity(ny, format="csr"), sp.identity(n, format="csr")
    a_ii = kx * sp.kron(iy, _second_difference(n)) + ky * sp.kron(_second_difference(ny), ix)
    last = np.arange(ny) * n + (n - 1)
    a_ig = sp.csr_matrix((np.full(ny, kx), (last, np.arange(ny))), shape=(n * ny, ny))
    rows = np.concatenate([np.arange(ny), np.arange(ny)])
    cols = np.concatenate([last, last - 1])
    vals = np.concatenate([np.full(ny, 2.0 * kx), np.full(ny, -0.5 * kx)])
    a_gi = sp.csr_matrix((vals, (rows, cols)), shape=(ny, n * ny))
    zero_ig = sp.csr_matrix((n * ny, ny))
    return Blocks2D(
        kind="fvm",
        m_ii=alpha * sp.identity(n * ny, format="csr"),
        a_ii=a_ii.tocsr(),
        m_igamma=zero_ig,
        a_igamma=a_ig,
        m_gammai=zero_ig.T.tocsr(),
        a_gammai=a_gi,
        m_gammagamma=sp.csr_matrix((ny, ny)),
        a_gammagamma=1.5 * kx * sp.identity(ny, format="csr"),
        stiffness_sign=-1.0,
    )


_Q1_MASS = np.array([[4, 2, 1, 2], [2, 4, 2, 1], [1, 2, 4, 2], [2, 1, 2, 4]], dtype=float)
_Q1_STIFF = np.array([[4, -1, -2, -1], [-1, 4, -1, -2], [-2, -1, 4, -1], [-1, -2, -1, 4]], dtype=float)


def q1_element_matrices(h: float, alpha: float = 1.0, lam: float = 1.0):
    """Consistent mass and stiffness of a bilinear ``h x h`` square.

    Local nodes run counter-clockwise from the lower left corner.
    """
    return alpha * h * h / 36.0 * _Q1_MASS, lam / 6.0 * _Q1_STIFF


def q1_assemble(nex: int, ney: int, h: float, alpha: float, lam: float):
    """Global Q1 mass and stiffness on ``nex x ney`` squares of size ``h``.

    Nodes ``(jj, ii)``, ``ii = 0..nex``, ``jj = 0..ney`` are numbered
    ``jj * (nex + 1) + ii``.
    """
    me, ke = q1_element_matrices(h, alpha, lam)
    nxn = nex + 1
    ei, ej = np.meshgrid(np.arange(nex), np.arange(ney))
    base = (ej * nxn + ei).ravel()
    conn = np.stack([base, base + 1, base + 1 + nxn, base + nxn], axis=1)
    rows = np.repeat(conn, 4, axis=1).ravel()
    cols = np.tile(conn, (1, 4)).ravel()
    nn = nxn * (ney + 1)
    mass = sp.coo_matrix((np.tile(me.ravel(), len(base)), (rows, cols)), shape=(nn, nn)).tocsr()
    stiff = sp.coo_matrix((np.tile(ke.ravel(), len(base)), (rows, cols)), shape=(nn, nn)).tocsr()
    return mass, stiff


def build_fem_2d(grid: GridSpec2D, mat2: Material) -> Blocks2D:
    """Bilinear FEM on the square grid; interior unknowns ordered ``j * nx2 + (i - 1)``."""
    nx, ny, h = grid.nx2, grid.ny, grid.dx2
    mass, stiff = q1_assemble(nx + 1, ny + 1, h, mat2.alpha, mat2.lam)
    scale = 1.0 / h**2
    mass, stiff = scale * mass, scale * stiff
    nxn = nx + 2
    jj = np.arange(1, ny + 1)
    interior = (jj[:, None] * nxn + np.arange(1, nx + 1)[None, :]).ravel()
    gamma = jj * nxn

    def blk(a, rows, cols):
        return a[rows][:, cols].tocsr()

    return Blocks2D(
        kind="fem",
        m_ii=blk(mass, interior, interior),
        a_ii=blk(stiff, interior, interior),
        m_igamma=blk(mass, interior, gamma),
        a_igamma=blk(stiff, interior, gamma),
        m_gammai=blk(mass, gamma, interior),
        a_gammai=blk(stiff, gamma, interior),
        m_gammagamma=blk(mass, gamma, gamma),
        a_gammagamma=blk(stiff, gamma, gamma),
        stiffness_sign=1.0,
    )


@dataclass
class State2D:
    u1: np.ndarray
    u2: np.ndarray
    u_gamma: np.ndarray

    def flat(self):
        return np.concatenate([self.u1, self.u2, self.u_gamma])

    @classmethod
    def from_function(cls, grid: GridSpec2D, f):
        """Sample ``f(x, y)`` at FVM cell centres, FEM nodes and interface nodes."""
        y = grid.dx2 * np.arange(1, grid.ny + 1)
        x1 = -1.0 + grid.dx1 * np.arange(1, grid.nx1 + 1)
        x2 = grid.dx2 * np.arange(1, grid.nx2 + 1)
        u1 = f(x1[None, :], y[:, None]) * np.ones((grid.ny, grid.nx1))
        u2 = f(x2[None, :], y[:, None]) * np.ones((grid.ny, grid.nx2))
        ug = f(np.zeros(grid.ny), y) * np.ones(grid.ny)
        return cls(u1.ravel(), u2.ravel(), ug)


def _factor(a):
    try:
        return spla.splu(a.tocsc())
    except RuntimeError as exc:
        raise SingularMatrixError(str(exc)) from exc


def dn_time_step_2d(blocks1: Blocks2D, blocks2: Blocks2D, cfg: DNConfig, state_prev: State2D):
    """DN iteration for one implicit Euler step of the 2D model."""
    dt = cfg.dt
    k1, c1, r1, g1 = blocks1.step(dt)
    k2, c2, r2, g2 = blocks2.step(dt)
    n2 = blocks2.n
    lu1 = _factor(k1)
    lu2 = _factor(sp.bmat([[k2, c2], [r2, g2]], format="csc"))
    u1n, u2n, gn = state_prev.u1, state_prev.u2, state_prev.u_gamma
    rhs1 = blocks1.m_ii @ u1n + blocks1.m_igamma @ gn
    rhs2 = np.concatenate([
        blocks2.m_ii @ u2n + blocks2.m_igamma @ gn,
        blocks1.m_gammai @ u1n + blocks2.m_gammai @ u2n
        + (blocks1.m_gammagamma + blocks2.m_gammagamma) @ gn,
    ])

    def dirichlet(u_gamma):
        return lu1.solve(rhs1 - c1 @ u_gamma)

    def neumann(u1, u_gamma):
        rhs = rhs2.copy()
        rhs[n2:] -= r1 @ u1 + g1 @ u_gamma
        sol = lu2.solve(rhs)
        return sol[:n2], sol[n2:]

    u1, u2, g, trace = dn_iterate(dirichlet, neumann, _initial_gamma(cfg, state_prev), cfg)
    return State2D(u1, u2, g), trace


def monolithic_2d(blocks1: Blocks2D, blocks2: Blocks2D, dt: float):
    """Return ``(A, M)`` of the coupled 2D implicit Euler step."""
    def full(t):
        k1, c1, r1, g1 = blocks1.step(t)
        k2, c2, r2, g2 = blocks2.step(t)
        return sp.bmat([[k1, None, c1], [None, k2, c2], [r1, r2, g1 + g2]], format="csc")
    return full(dt), full(0.0)


def monolithic_step_2d(blocks1: Blocks2D, blocks2: Blocks2D, dt: float, state_prev: State2D) -> State2D:
    a, m = monolithic_2d(blocks1, blocks2, dt)
    u = _factor(a).solve(m @ state_prev.flat())
    n1, n2 = blocks1.n, blocks2.n
    return State2D(u[:n1], u[n1:n1 + n2], u[n1 + n2:])


def tangential_modes(grid: GridSpec2D, k):
    """Eigenvalues of the tangential mass (per ``dx2``) and stiffness (per ``dx2``) for sine mode ``k``."""
    theta = np.asarray(k) * np.pi / (grid.ny + 1)
    m_k = (4.0 + 2.0 * np.cos(theta)) / 6.0
    kappa_k = (2.0 - 2.0 * np.cos(theta)) / grid.dx2**2
    return m_k, kappa_k


def mode_rates(grid: GridSpec2D, mat1: Material, mat2: Material, dt: float) -> np.ndarray:
    """Contraction factor of every tangential sine mode of the 2D iteration.

    The 2D iteration matrix is diagonal in the sine basis along the
    interface; mode ``k`` is a 1D problem with a reaction term from the
    tangential second derivative.  Each factor comes from the direct 1D
    Schur complements.
    """
    g1 = grid.grid1d()
    out = np.empty(grid.ny)
    for k in range(1, grid.ny + 1):
        m_k, kappa = tangential_modes(grid, k)
        b1 = build_fvm_blocks(g1, lam=mat1.lam, alpha=mat1.alpha + dt * mat1.lam * kappa)
        b2 = build_fem_blocks(g1, lam=mat2.lam * m_k, alpha=mat2.alpha * m_k + dt * mat2.lam * kappa)
        out[k - 1] = abs(_schur(b1, dt) / _schur(b2, dt))
    return out


def _schur(blocks, dt):
    sb = step_blocks(blocks, dt)
    w = TridiagonalFactor(sb.k_ii).solve(sb.k_igamma)
    return sb.k_gammagamma - sb.k_gammai @ w
