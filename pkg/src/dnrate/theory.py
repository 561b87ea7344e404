"""Closed-form convergence rate of the 1D FVM-FEM Dirichlet-Neumann iteration.

Everything here is a scalar function of the mesh widths, the time step and
the material coefficients.  Each closed form has a direct numerical
counterpart (tridiagonal solves, explicit summation) used as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discretization import GridSpec1D, build_fem_blocks, build_fvm_blocks, step_blocks
from .materials import Material
from .tridiag import TridiagonalFactor


class DegenerateParameterError(ArithmeticError):
    pass


@dataclass(frozen=True)
class RateInputs:
    """Parameters of the rate formula.

    Normally built from a :class:`GridSpec1D`.  :meth:`from_widths` accepts
    arbitrary mesh widths (e.g. widths measured on an application mesh); the
    sums then run over ``n_m = max(round(1/dx_m) - 1, 0)`` terms evaluated
    at the given widths.
    """

    dt: float
    dx1: float
    dx2: float
    n1: int
    n2: int
    lam1: float
    alpha1: float
    lam2: float
    alpha2: float

    def __post_init__(self):
        if not self.dt >= 0:
            raise ValueError("dt must be non-negative")
        if not (self.dx1 > 0 and self.dx2 > 0):
            raise ValueError("mesh widths must be positive")

    @classmethod
    def build(cls, dt: float, grid: GridSpec1D, mat1: Material, mat2: Material):
        return cls(dt, grid.dx1, grid.dx2, grid.n1, grid.n2,
                   mat1.lam, mat1.alpha, mat2.lam, mat2.alpha)

    @classmethod
    def from_widths(cls, dt, dx1, dx2, mat1: Material, mat2: Material):
        n1 = max(int(round(1.0 / dx1)) - 1, 0)
        n2 = max(int(round(1.0 / dx2)) - 1, 0)
        return cls(dt, dx1, dx2, n1, n2, mat1.lam, mat1.alpha, mat2.lam, mat2.alpha)

    @property
    def r(self) -> float:
        return self.dx2 / self.dx1

    @property
    def grid(self) -> GridSpec1D:
        return GridSpec1D(self.n1, self.n2)

    def with_dt(self, dt: float) -> "RateInputs":
        return RateInputs(dt, self.dx1, self.dx2, self.n1, self.n2,
                          self.lam1, self.alpha1, self.lam2, self.alpha2)


@dataclass(frozen=True)
class RateReport:
    sigma_exact: float
    sigma_schur: float
    beta: float
    delta_r: float
    temporal_limit: float = 0.0


# --- building blocks --------------------------------------------------------

def toeplitz_eigenpairs(n: int, off: float, diag: float):
    """Eigenvalues and orthonormal eigenvectors of ``tridiag(off, diag, off)``.

    Returns ``(mu, V)`` with ``mu[j-1] = diag + 2*off*cos(j*pi/(n+1))`` and
    ``V[i-1, j-1] = sin(i*j*pi/(n+1)) / sqrt(sum_k sin^2(k*pi/(n+1)))``.
    """
    j = np.arange(1, n + 1)
    theta = j * np.pi / (n + 1)
    mu = diag + 2.0 * off * np.cos(theta)
    norm = math.sqrt(math.fsum(np.sin(theta) ** 2))
    v = np.sin(np.outer(j, j) * np.pi / (n + 1)) / norm
    return mu, v


def _angles(n: int, dx: float) -> np.ndarray:
    return np.arange(1, n + 1) * np.pi * dx


def sums_s(inp: RateInputs):
    """The three spectral sums ``(s0, s1, s2)``."""
    t1 = _angles(inp.n1, inp.dx1)
    den1 = inp.alpha1 * inp.dx1**2 + 2.0 * inp.lam1 * inp.dt * (1.0 - np.cos(t1))
    t2 = _angles(inp.n2, inp.dx2)
    a2 = inp.alpha2 * inp.dx2**2
    den2 = 2.0 * a2 + 6.0 * inp.lam2 * inp.dt + (a2 - 6.0 * inp.lam2 * inp.dt) * np.cos(t2)
    # degenerate coefficients give inf/nan here; sigma_exact reports them
    with np.errstate(divide="ignore", invalid="ignore"):
        s0 = math.fsum(np.sin(t1) * np.sin(2.0 * t1) / den1)
        s1 = math.fsum(np.sin(t1) ** 2 / den1)
        s2 = math.fsum(np.sin(t2) ** 2 / den2)
    return s0, s1, s2


def sin2_sum(n: int, dx: float) -> float:
    return math.fsum(np.sin(_angles(n, dx)) ** 2)


def inverse_entries(inp: RateInputs):
    """Entries ``(N1,N1)``, ``(N1-1,N1)`` of ``(alpha1 I - dt A1)^-1`` and
    ``(1,1)`` of ``(M2 + dt A2)^-1`` from the eigendecomposition."""
    if inp.n1 < 2:
        raise ValueError("inverse entries need n1 >= 2")
    s0, s1, s2 = sums_s(inp)
    q1 = sin2_sum(inp.n1, inp.dx1)
    q2 = sin2_sum(inp.n2, inp.dx2)
    alpha1_nn = inp.dx1**2 * s1 / q1
    alpha1_nm1n = inp.dx1**2 * s0 / q1
    alpha2_11 = 3.0 * inp.dx2**2 * s2 / q2
    return alpha1_nn, alpha1_nm1n, alpha2_11


def closed_sum_checks(n: int, dx: float | None = None) -> dict:
    """Numerical sums next to their closed forms for ``dx = 1/(n+1)``.

    Keys map to ``(summed, closed_form)`` pairs.
    """
    dx = 1.0 / (n + 1) if dx is None else dx
    t = _angles(n, dx)
    return {
        "sin2": (math.fsum(np.sin(t) ** 2), 1.0 / (2.0 * dx)),
        "cos2": (math.fsum(np.cos(t) ** 2), (1.0 - 2.0 * dx) / (2.0 * dx)),
        "cos": (math.fsum(np.cos(t)), 0.0),
    }


# --- Schur complements ------------------------------------------------------

def schur_s1(inp: RateInputs) -> float:
    """FVM Schur complement from the spectral sums."""
    s0, s1, _ = sums_s(inp)
    q1 = sin2_sum(inp.n1, inp.dx1)
    lam, dt, dx = inp.lam1, inp.dt, inp.dx1
    return 1.5 * lam * dt / dx**2 - lam**2 * dt**2 / (2.0 * dx**2) * (4.0 * s1 - s0) / q1


def schur_s2(inp: RateInputs) -> float:
    """FEM Schur complement from the spectral sums."""
    _, _, s2 = sums_s(inp)
    q2 = sin2_sum(inp.n2, inp.dx2)
    a2 = inp.alpha2 * inp.dx2**2
    lt = inp.lam2 * inp.dt
    return (a2 + 3.0 * lt) / (3.0 * inp.dx2**2) - (a2 - 6.0 * lt) ** 2 / (12.0 * inp.dx2**2) * s2 / q2


def _direct_schur(blocks, dt) -> float:
    sb = step_blocks(blocks, dt)
    w = TridiagonalFactor(sb.k_ii).solve(sb.k_igamma)
    return float(sb.k_gammagamma - sb.k_gammai @ w)


def schur_direct(inp: RateInputs):
    """``(S1, S2)`` from the assembled blocks with one tridiagonal solve each."""
    grid = inp.grid
    b1 = build_fvm_blocks(grid, lam=inp.lam1, alpha=inp.alpha1)
    b2 = build_fem_blocks(grid, lam=inp.lam2, alpha=inp.alpha2)
    return _direct_schur(b1, inp.dt), _direct_schur(b2, inp.dt)


def sigma_schur(inp: RateInputs) -> float:
    """``|S2^-1 S1|`` from the direct Schur complements."""
    s1, s2 = schur_direct(inp)
    return abs(s1 / s2)


# --- the rate ---------------------------------------------------------------

def sigma_exact(inp: RateInputs) -> float:
    """Spectral radius of the DN iteration matrix, closed formula."""
    s0, s1, s2 = sums_s(inp)
    lam1, lam2, a2, dt = inp.lam1, inp.lam2, inp.alpha2, inp.dt
    dx1, dx2 = inp.dx1, inp.dx2
    num = 3.0 * dx2**2 * (3.0 * lam1 * dt - 2.0 * lam1**2 * dx1 * dt**2 * (4.0 * s1 - s0))
    den = dx1**2 * (2.0 * (a2 * dx2**2 + 3.0 * lam2 * dt)
                    - dx2 * (a2 * dx2**2 - 6.0 * lam2 * dt) ** 2 * s2)
    if den == 0.0 or not math.isfinite(den):
        raise DegenerateParameterError(f"formula denominator is {den!r}")
    return abs(num / den)


def semidiscrete_beta(dt: float, mat1: Material, mat2: Material) -> float:
    """Rate predicted by the space-continuous, time-discrete analysis."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    q = (mat1.lam / mat2.lam) * math.sqrt(mat2.d / mat1.d)
    return abs(-q * math.tanh(-1.0 / math.sqrt(mat2.d * dt)) / math.tanh(1.0 / math.sqrt(mat1.d * dt)))


def spatial_limit(r: float, lam1: float, lam2: float) -> float:
    """Limit of the rate for ``dx1 -> 0`` at fixed aspect ratio ``r``."""
    return r * lam1 / lam2


def temporal_limit() -> float:
    """Limit of the rate for ``dt -> 0``; the FVM side has no interface mass."""
    return 0.0


def fem_fem_limits(mat1: Material, mat2: Material):
    """Published limits ``(dt -> 0, dx -> 0)`` for linear FEM on both sides, r = 1."""
    return mat1.alpha / mat2.alpha, mat1.lam / mat2.lam


def rate_report(inp: RateInputs, mat1: Material | None = None, mat2: Material | None = None) -> RateReport:
    if mat1 is None or mat2 is None:
        beta = float("nan")
    else:
        beta = semidiscrete_beta(inp.dt, mat1, mat2)
    return RateReport(
        sigma_exact=sigma_exact(inp),
        sigma_schur=sigma_schur(inp),
        beta=beta,
        delta_r=spatial_limit(inp.r, inp.lam1, inp.lam2),
    )
