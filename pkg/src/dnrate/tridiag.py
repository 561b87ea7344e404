"""Compact three-band matrices and the Thomas algorithm."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import lapack


class SingularMatrixError(ArithmeticError):
    """Raised when a linear solve hits a zero pivot."""


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Tridiagonal matrix stored as its three bands.

    ``sub[i]`` is entry ``(i+1, i)`` and ``sup[i]`` is entry ``(i, i+1)``.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        for name in ("sub", "diag", "sup"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.diag.shape[0]
        if self.sub.shape != (max(n - 1, 0),) or self.sup.shape != (max(n - 1, 0),):
            raise ValueError("off-diagonal bands must have length dim - 1")

    @classmethod
    def toeplitz(cls, n: int, sub: float, diag: float, sup: float | None = None):
        sup = sub if sup is None else sup
        return cls(np.full(n - 1, sub), np.full(n, diag), np.full(n - 1, sup))

    @property
    def dim(self) -> int:
        return self.diag.shape[0]

    @property
    def is_symmetric_toeplitz(self) -> bool:
        bands_equal = np.array_equal(self.sub, self.sup)
        constant = all(b.size == 0 or np.all(b == b[0]) for b in (self.sub, self.diag))
        return bool(bands_equal and constant)

    def __add__(self, other: "TridiagonalMatrix") -> "TridiagonalMatrix":
        return TridiagonalMatrix(self.sub + other.sub, self.diag + other.diag, self.sup + other.sup)

    def __mul__(self, c: float) -> "TridiagonalMatrix":
        return TridiagonalMatrix(c * self.sub, c * self.diag, c * self.sup)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[1:] += self.sub * x[:-1]
        y[:-1] += self.sup * x[1:]
        return y

    def to_sparse(self):
        return sp.diags([self.sub, self.diag, self.sup], [-1, 0, 1], format="csr")

    def to_dense(self):
        return self.to_sparse().toarray()


def thomas(m: TridiagonalMatrix, rhs) -> np.ndarray:
    """Solve ``m @ x = rhs`` with the textbook Thomas algorithm.

    Gaussian elimination without pivoting, fine for the diagonally dominant
    matrices assembled here. ``rhs`` may be a vector or an ``(n, k)`` array.
    """
    d = np.array(rhs, dtype=float)
    n = m.dim
    if d.shape[0] != n:
        raise ValueError(f"rhs has {d.shape[0]} rows, matrix has dimension {n}")
    b = m.diag.copy()
    a, c = m.sub, m.sup
    for k in range(1, n):
        if b[k - 1] == 0.0:
            raise SingularMatrixError(f"zero pivot in row {k - 1}")
        w = a[k - 1] / b[k - 1]
        b[k] -= w * c[k - 1]
        d[k] -= w * d[k - 1]
    if b[n - 1] == 0.0:
        raise SingularMatrixError(f"zero pivot in row {n - 1}")
    d[n - 1] /= b[n - 1]
    for k in range(n - 2, -1, -1):
        d[k] = (d[k] - c[k] * d[k + 1]) / b[k]
    return d


class TridiagonalFactor:
    """LU factorization of a tridiagonal matrix (LAPACK ``gttrf``).

    Factor once, then call :meth:`solve` for every right hand side; the DN
    iteration reuses the same subdomain matrix in every sweep.
    """

    def __init__(self, m: TridiagonalMatrix):
        self.dim = m.dim
        self._small = None
        if self.dim <= 2:
            # the f2py wrappers reject the empty du2 band of tiny systems
            dense = m.to_dense()
            if np.linalg.det(dense) == 0.0:
                raise SingularMatrixError(f"singular {self.dim}x{self.dim} matrix")
            self._small = np.linalg.inv(dense)
            return
        dl, d, du, du2, ipiv, info = lapack.dgttrf(m.sub, m.diag, m.sup)
        if info > 0:
            raise SingularMatrixError(f"zero pivot in row {info - 1}")
        self._lu = (dl, d, du, du2, ipiv)

    def solve(self, rhs) -> np.ndarray:
        b = np.asarray(rhs, dtype=float)
        if b.shape[0] != self.dim:
            raise ValueError(f"rhs has {b.shape[0]} rows, matrix has dimension {self.dim}")
        if self._small is not None:
            return self._small @ b
        x, info = lapack.dgttrs(*self._lu, b)
        if info != 0:
            raise ValueError(f"dgttrs failed with info={info}")
        return x


def solve_tridiagonal(m: TridiagonalMatrix, rhs) -> np.ndarray:
    """Solve ``m @ x = rhs``; raises :class:`SingularMatrixError` on a zero pivot."""
    return TridiagonalFactor(m).solve(rhs)
