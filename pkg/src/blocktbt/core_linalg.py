"""Dense complex linear algebra kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` with two axes.
Products and Kronecker products delegate to numpy; the LU factorization
with partial pivoting is implemented here so that the singularity policy
(``|pivot| <= n * eps * max|a|``) and the reported pivot index are under our
control.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonFiniteEntry, SingularMatrix

EPS = np.finfo(np.float64).eps


def as_matrix(a, copy=False):
    """Coerce ``a`` to a finite 2-D complex128 array.

    Scalars become 1x1 matrices and 1-D input becomes a single row.
    """
    out = np.array(a, dtype=np.complex128, copy=copy or None, ndmin=2)
    if out.ndim != 2:
        raise ValueError(f"expected a matrix, got an array with {out.ndim} axes")
    if not np.all(np.isfinite(out)):
        raise NonFiniteEntry("matrix contains NaN or Inf entries")
    return out


def eye(n):
    return np.eye(n, dtype=np.complex128)


def zeros(rows, cols):
    return np.zeros((rows, cols), dtype=np.complex128)


def ones_col(n):
    """The n x 1 column of ones."""
    return np.ones((n, 1), dtype=np.complex128)


def matmul(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionMismatch("matmul", a.shape, b.shape)
    return a @ b


def kron(a, b):
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def kron_chain(*factors):
    out = np.ones((1, 1), dtype=np.complex128)
    for f in factors:
        out = kron(out, f)
    return out


def conj_transpose(a):
    return np.asarray(a).conj().T


def transpose(a):
    return np.asarray(a).T


def add(a, b):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch("add", a.shape, b.shape)
    return a + b


def sub(a, b):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch("sub", a.shape, b.shape)
    return a - b


def scale(c, a):
    return complex(c) * np.asarray(a)


def norm_max(a):
    """Largest entry modulus; 0.0 for an empty matrix."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def rel_residual(value, reference, floor=0.0):
    """``|value - reference|_max / max(|reference|_max, floor)``.

    With ``floor=0`` this is the plain relative error; an all-zero reference
    falls back to the absolute error.
    """
    diff = norm_max(np.asarray(value) - np.asarray(reference))
    denom = max(norm_max(reference), floor)
    return diff / denom if denom > 0 else diff


@dataclass(frozen=True)
class LUFactor:
    """Packed ``P a = L U`` with unit-diagonal L stored below the diagonal of ``lu``."""

    lu: np.ndarray
    perm: np.ndarray

    @property
    def n(self):
        return self.lu.shape[0]


def lu_factor(a):
    a = as_matrix(a, copy=True)
    n, cols = a.shape
    if n != cols:
        raise DimensionMismatch("lu_factor", a.shape, (cols, n))
    threshold = n * EPS * norm_max(a)
    perm = np.arange(n)
    for j in range(n):
        p = j + int(np.argmax(np.abs(a[j:, j])))
        if abs(a[p, j]) <= threshold:
            raise SingularMatrix(j, a[p, j], threshold)
        if p != j:
            a[[j, p]] = a[[p, j]]
            perm[[j, p]] = perm[[p, j]]
        a[j + 1:, j] /= a[j, j]
        a[j + 1:, j + 1:] -= np.outer(a[j + 1:, j], a[j, j + 1:])
    return LUFactor(a, perm)


def lu_factor_solve(factor, rhs):
    rhs = as_matrix(rhs)
    if rhs.shape[0] != factor.n:
        raise DimensionMismatch("lu_solve", factor.lu.shape, rhs.shape)
    lu = factor.lu
    x = rhs[factor.perm].copy()
    n = factor.n
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] -= lu[i, i + 1:] @ x[i + 1:]
        x[i] /= lu[i, i]
    return x


def lu_solve(a, rhs):
    """Solve ``a @ x = rhs`` by LU with partial pivoting."""
    a = np.asarray(a)
    rhs = np.asarray(rhs)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or rhs.ndim != 2 or rhs.shape[0] != a.shape[0]:
        raise DimensionMismatch("lu_solve", a.shape, rhs.shape)
    return lu_factor_solve(lu_factor(a), rhs)


def solve_right(a, rhs):
    """Solve ``x @ a = rhs`` (i.e. ``rhs @ a^{-1}``) without forming the inverse."""
    a = np.asarray(a)
    rhs = np.asarray(rhs)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or rhs.ndim != 2 or rhs.shape[1] != a.shape[0]:
        raise DimensionMismatch("solve_right", rhs.shape, a.shape)
    return lu_solve(a.T, rhs.T).T


def inverse(a):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("inverse", a.shape, a.shape[::-1])
    return lu_solve(a, eye(a.shape[0]))
