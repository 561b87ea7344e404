"""Explicit 1D block matrices for the FVM side [-1, 0] and the FEM side [0, 1].

Unknowns are ordered ``(u1, u2, u_gamma)``: the ``n1`` FVM cell values
(``u1[-1]`` is the cell next to the interface), the ``n2`` interior FEM
nodes (``u2[0]`` is the node next to the interface) and the interface value.

The FVM stiffness blocks are stored with the sign they are usually printed
with, ``A1 = (lam/dx^2) tridiag(1, -2, 1)``, i.e. negative definite, while
the FEM blocks are positive definite.  :func:`step_blocks` is the single
place that turns both conventions into the implicit Euler operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .materials import Material
from .tridiag import TridiagonalMatrix


class AssemblyError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec1D:
    """Uniform meshes on both unit subdomains; ``dx_m = 1 / (n_m + 1)``."""

    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 2:
            raise ValueError(f"n1 must be >= 2 (one-sided flux uses two cells), got {self.n1}")
        if self.n2 < 1:
            raise ValueError(f"n2 must be >= 1, got {self.n2}")

    @property
    def dx1(self) -> float:
        return 1.0 / (self.n1 + 1)

    @property
    def dx2(self) -> float:
        return 1.0 / (self.n2 + 1)

    @property
    def r(self) -> float:
        return self.dx2 / self.dx1

    @classmethod
    def from_dx(cls, dx1: float, r: float = 1.0) -> "GridSpec1D":
        """Grid with ``dx1`` and ``dx2 = r * dx1``; both must divide 1 evenly."""
        n1 = _cells_for(dx1)
        n2 = _cells_for(r * dx1)
        return cls(n1, n2)


def _cells_for(dx: float) -> int:
    m = 1.0 / dx
    n = int(round(m))
    if abs(m - n) > 1e-8 * m:
        raise ValueError(f"mesh width {dx!r} does not divide the unit interval")
    return n - 1


@dataclass(frozen=True)
class SubdomainBlocks:
    """Mass and stiffness blocks of one subdomain.

    ``*_igamma`` are interior-to-interface columns, ``*_gammai`` the
    interface rows and ``*_gammagamma`` the interface scalars.
    ``stiffness_sign`` is -1 for blocks kept in the negative definite
    FVM convention and +1 otherwise.
    """

    kind: str
    m_ii: TridiagonalMatrix
    a_ii: TridiagonalMatrix
    m_igamma: np.ndarray
    a_igamma: np.ndarray
    m_gammai: np.ndarray
    a_gammai: np.ndarray
    m_gammagamma: float
    a_gammagamma: float
    stiffness_sign: float

    @property
    def n(self) -> int:
        return self.m_ii.dim


def _unit(n: int, j: int) -> np.ndarray:
    e = np.zeros(n)
    e[j] = 1.0
    return e


def build_fvm_blocks(grid: GridSpec1D, mat1: Material | None = None, *, lam=None, alpha=None):
    """FVM blocks on [-1, 0] with the second order one-sided interface flux.

    ``lam``/``alpha`` override the material (they may be zero, which a
    :class:`Material` does not allow).
    """
    lam = mat1.lam if lam is None else lam
    alpha = mat1.alpha if alpha is None else alpha
    n, dx = grid.n1, grid.dx1
    if n < 2:
        raise AssemblyError("FVM side needs at least two cells")
    k = lam / dx**2
    a_gammai = np.zeros(n)
    a_gammai[n - 1] = 4.0
    a_gammai[n - 2] = -1.0
    return SubdomainBlocks(
        kind="fvm",
        m_ii=TridiagonalMatrix.toeplitz(n, 0.0, alpha),
        a_ii=TridiagonalMatrix.toeplitz(n, k, -2.0 * k),
        m_igamma=np.zeros(n),
        a_igamma=k * _unit(n, n - 1),
        m_gammai=np.zeros(n),
        a_gammai=0.5 * k * a_gammai,
        m_gammagamma=0.0,
        a_gammagamma=1.5 * k,
        stiffness_sign=-1.0,
    )


def build_fem_blocks(grid: GridSpec1D, mat2: Material | None = None, *, lam=None, alpha=None):
    """Linear finite element blocks on [0, 1] (rows divided by ``dx2``)."""
    lam = mat2.lam if lam is None else lam
    alpha = mat2.alpha if alpha is None else alpha
    n, dx = grid.n2, grid.dx2
    if n < 1:
        raise AssemblyError("FEM side needs at least one interior node")
    k = lam / dx**2
    e1 = _unit(n, 0)
    return SubdomainBlocks(
        kind="fem",
        m_ii=TridiagonalMatrix.toeplitz(n, alpha / 6.0, 4.0 * alpha / 6.0),
        a_ii=TridiagonalMatrix.toeplitz(n, -k, 2.0 * k),
        m_igamma=alpha / 6.0 * e1,
        a_igamma=-k * e1,
        m_gammai=alpha / 6.0 * e1,
        a_gammai=-k * e1,
        m_gammagamma=2.0 * alpha / 6.0,
        a_gammagamma=k,
        stiffness_sign=1.0,
    )


@dataclass(frozen=True)
class StepBlocks:
    """Blocks of ``M + dt*A`` for one subdomain, signs resolved."""

    k_ii: TridiagonalMatrix
    k_igamma: np.ndarray
    k_gammai: np.ndarray
    k_gammagamma: float


def step_blocks(blocks: SubdomainBlocks, dt: float) -> StepBlocks:
    """Implicit Euler blocks ``M + dt*A`` of one subdomain.

    For the FVM convention the interior, column and row stiffness blocks
    enter with a minus sign while the interface scalar keeps its sign; this
    reproduces the Schur complement
    ``dt*A_gg - dt^2 * A_gi (alpha1*I - dt*A1)^-1 A_ig``.
    """
    s = blocks.stiffness_sign
    return StepBlocks(
        k_ii=blocks.m_ii + (s * dt) * blocks.a_ii,
        k_igamma=blocks.m_igamma + s * dt * blocks.a_igamma,
        k_gammai=blocks.m_gammai + s * dt * blocks.a_gammai,
        k_gammagamma=blocks.m_gammagamma + dt * blocks.a_gammagamma,
    )


@dataclass(frozen=True)
class CoupledSystem:
    """Monolithic implicit Euler system ``a_step u^{n+1} = m_tilde u^n``."""

    a_step: sp.csr_matrix
    m_tilde: sp.csr_matrix
    n1: int
    n2: int

    @property
    def dim(self) -> int:
        return self.n1 + self.n2 + 1

    @property
    def layout(self) -> dict[str, slice]:
        return {
            "u1": slice(0, self.n1),
            "u2": slice(self.n1, self.n1 + self.n2),
            "gamma": slice(self.n1 + self.n2, self.dim),
        }


def _block_matrix(b1: StepBlocks, b2: StepBlocks) -> sp.csr_matrix:
    col1 = sp.csr_matrix(b1.k_igamma.reshape(-1, 1))
    col2 = sp.csr_matrix(b2.k_igamma.reshape(-1, 1))
    row1 = sp.csr_matrix(b1.k_gammai.reshape(1, -1))
    row2 = sp.csr_matrix(b2.k_gammai.reshape(1, -1))
    gg = sp.csr_matrix([[b1.k_gammagamma + b2.k_gammagamma]])
    return sp.bmat(
        [
            [b1.k_ii.to_sparse(), None, col1],
            [None, b2.k_ii.to_sparse(), col2],
            [row1, row2, gg],
        ],
        format="csr",
    )


def assemble(blocks1: SubdomainBlocks, blocks2: SubdomainBlocks, dt: float) -> CoupledSystem:
    """Assemble ``M~ + dt*A~`` and ``M~`` for one implicit Euler step."""
    if dt < 0:
        raise AssemblyError(f"dt must be non-negative, got {dt}")
    for b in (blocks1, blocks2):
        n = b.n
        if any(v.shape != (n,) for v in (b.m_igamma, b.a_igamma, b.m_gammai, b.a_gammai)):
            raise AssemblyError(f"{b.kind} coupling vectors do not match interior size {n}")
    a_step = _block_matrix(step_blocks(blocks1, dt), step_blocks(blocks2, dt))
    m_tilde = _block_matrix(step_blocks(blocks1, 0.0), step_blocks(blocks2, 0.0))
    return CoupledSystem(a_step, m_tilde, blocks1.n, blocks2.n)
