"""Dirichlet-Neumann iteration for one implicit Euler step in 1D."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse.linalg as spla

from .discretization import CoupledSystem, GridSpec1D, SubdomainBlocks, step_blocks
from .tridiag import SingularMatrixError, TridiagonalFactor


class RateEstimationError(ValueError):
    pass


@dataclass(frozen=True)
class DNConfig:
    """Settings of one DN solve.

    ``initial_interface`` is ``"previous"`` (start from the interface value
    of the previous step) or an explicit starting value.
    """

    dt: float
    tol: float = 1e-10
    max_iters: int = 100
    initial_interface: str | float | np.ndarray = "previous"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 2:
            raise ValueError("max_iters must be at least 2")
        if not self.dt > 0:
            raise ValueError("dt must be positive")


@dataclass
class IterationTrace:
    interface_values: list = field(default_factory=list)
    update_norms: list = field(default_factory=list)
    converged: bool = False

    @property
    def iters(self) -> int:
        return len(self.update_norms)


@dataclass
class StateVector:
    u1: np.ndarray
    u2: np.ndarray
    u_gamma: np.ndarray

    def __post_init__(self):
        self.u1 = np.asarray(self.u1, dtype=float)
        self.u2 = np.asarray(self.u2, dtype=float)
        self.u_gamma = np.atleast_1d(np.asarray(self.u_gamma, dtype=float))

    def flat(self) -> np.ndarray:
        return np.concatenate([self.u1.ravel(), self.u2.ravel(), self.u_gamma])

    @classmethod
    def from_flat(cls, u, n1: int, n2: int):
        u = np.asarray(u, dtype=float)
        return cls(u[:n1], u[n1:n1 + n2], u[n1 + n2:])

    @classmethod
    def zeros(cls, grid: GridSpec1D):
        return cls(np.zeros(grid.n1), np.zeros(grid.n2), np.zeros(1))

    @classmethod
    def hat(cls, grid: GridSpec1D, peak: float = 1.0):
        """Piecewise linear profile: 0 at both outer boundaries, ``peak`` at the interface."""
        x1 = -1.0 + grid.dx1 * np.arange(1, grid.n1 + 1)
        x2 = grid.dx2 * np.arange(1, grid.n2 + 1)
        return cls(peak * (1.0 + x1), peak * (1.0 - x2), [peak])


def dn_iterate(dirichlet: Callable, neumann: Callable, u_gamma0, cfg: DNConfig):
    """Run the DN loop given the two subdomain solvers.

    ``dirichlet(u_gamma)`` returns the Omega_1 interior solution for the
    given interface data, ``neumann(u1, u_gamma)`` the pair
    ``(u2, u_gamma_new)``.  Returns ``(u1, u2, u_gamma, trace)``.
    """
    u_gamma = np.atleast_1d(np.array(u_gamma0, dtype=float))
    trace = IterationTrace(interface_values=[u_gamma.copy()])
    u1 = u2 = None
    for _ in range(cfg.max_iters):
        u1 = dirichlet(u_gamma)
        u2, new_gamma = neumann(u1, u_gamma)
        norm = float(np.linalg.norm(new_gamma - u_gamma))
        u_gamma = new_gamma
        trace.interface_values.append(u_gamma.copy())
        trace.update_norms.append(norm)
        if not np.isfinite(norm):
            break
        if norm <= cfg.tol:
            trace.converged = True
            break
    return u1, u2, u_gamma, trace


def _initial_gamma(cfg: DNConfig, state_prev: StateVector):
    if isinstance(cfg.initial_interface, str):
        if cfg.initial_interface != "previous":
            raise ValueError(f"unknown interface initialization {cfg.initial_interface!r}")
        return state_prev.u_gamma
    return np.broadcast_to(np.asarray(cfg.initial_interface, dtype=float), state_prev.u_gamma.shape)


def dn_time_step(blocks1: SubdomainBlocks, blocks2: SubdomainBlocks, cfg: DNConfig,
                 state_prev: StateVector):
    """One implicit Euler step solved by the Dirichlet-Neumann iteration.

    Omega_1 (FVM) gets Dirichlet data, Omega_2 (FEM) the flux computed from
    the fresh Omega_1 solution.  Non-convergence is reported through
    ``trace.converged``; it is not an error.
    """
    dt = cfg.dt
    s1, s2 = step_blocks(blocks1, dt), step_blocks(blocks2, dt)
    f1, f2 = TridiagonalFactor(s1.k_ii), TridiagonalFactor(s2.k_ii)
    u1n, u2n, gn = state_prev.u1, state_prev.u2, state_prev.u_gamma[0]

    rhs1 = blocks1.m_ii.matvec(u1n) + blocks1.m_igamma * gn
    rhs2 = blocks2.m_ii.matvec(u2n) + blocks2.m_igamma * gn
    rhs_gamma = (blocks1.m_gammai @ u1n + blocks2.m_gammai @ u2n
                 + (blocks1.m_gammagamma + blocks2.m_gammagamma) * gn)

    # Neumann solve by elimination of the interior: two tridiagonal solves
    # once, then scalar work per iteration.
    w2 = f2.solve(s2.k_igamma)
    z2 = f2.solve(rhs2)
    schur2 = s2.k_gammagamma - s2.k_gammai @ w2
    if schur2 == 0.0:
        raise SingularMatrixError("Neumann subproblem is singular")

    def dirichlet(u_gamma):
        return f1.solve(rhs1 - s1.k_igamma * u_gamma[0])

    def neumann(u1, u_gamma):
        b = s1.k_gammai @ u1 + s1.k_gammagamma * u_gamma[0]
        g = (rhs_gamma - b - s2.k_gammai @ z2) / schur2
        return z2 - w2 * g, np.array([g])

    u1, u2, g, trace = dn_iterate(dirichlet, neumann, _initial_gamma(cfg, state_prev), cfg)
    return StateVector(u1, u2, g), trace


def monolithic_step(system: CoupledSystem, state_prev: StateVector) -> StateVector:
    """Direct solve of ``a_step u^{n+1} = m_tilde u^n``."""
    rhs = system.m_tilde @ state_prev.flat()
    try:
        lu = spla.splu(system.a_step.tocsc())
    except RuntimeError as exc:
        raise SingularMatrixError(str(exc)) from exc
    u = lu.solve(rhs)
    return StateVector.from_flat(u, system.n1, system.n2)


def _ratios(norms, scale, noise_rtol):
    eps = np.finfo(float).eps
    den_floor = 100.0 * eps * norms[0]
    num_floor = noise_rtol * scale
    out = []
    for k in range(len(norms) - 1):
        den, num = norms[k], norms[k + 1]
        if den > den_floor and den > 0:
            out.append((k, num / den, num >= num_floor))
    return out


def observed_rate(trace: IterationTrace, window: int = 3, noise_rtol: float = 1e-9) -> float:
    """Asymptotic contraction factor from the update norms of a trace.

    Geometric mean of the last ``window`` ratios ``|du_{k+1}| / |du_k|``.
    Ratios are skipped when the denominator is below ``100 eps`` times the
    first update, and when the numerator is below ``noise_rtol`` times the
    size of the interface iterates (there the difference is dominated by
    rounding).  If no ratio passes the second test the least contaminated
    one is used.
    """
    norms = np.asarray(trace.update_norms, dtype=float)
    if norms.size < 3:
        raise RateEstimationError(f"need at least three iterations, trace has {norms.size}")
    if norms[0] == 0.0:
        return 0.0
    if trace.interface_values:
        scale = max(float(np.max([np.linalg.norm(v) for v in trace.interface_values])), norms[0])
    else:
        scale = norms[0]
    ratios = _ratios(norms, scale, noise_rtol)
    if not ratios:
        return 0.0
    clean = [q for _, q, ok in ratios if ok]
    if not clean:
        return float(ratios[0][1])
    sel = np.asarray(clean[-window:])
    if np.any(sel == 0.0):
        return 0.0
    return float(np.exp(np.mean(np.log(sel))))


def reference_rate(trace: IterationTrace, u_ref, window: int = 3, noise_rtol: float = 1e-9) -> float:
    """Rate measured on errors ``|u_gamma^k - u_ref|`` instead of updates."""
    errs = [float(np.linalg.norm(np.asarray(v) - u_ref)) for v in trace.interface_values]
    pseudo = IterationTrace(interface_values=trace.interface_values, update_norms=errs)
    return observed_rate(pseudo, window=window, noise_rtol=noise_rtol)
