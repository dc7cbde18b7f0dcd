"""Displacement operators, coupling matrices and the identities they satisfy.

For a block TBT matrix ``T`` and ``p = 1, 2`` (``p = 3`` as well for 3-D
Toeplitz matrices)::

    A_p T - T A_p^* = i (M_1p M_2p + M_3p M_4p) = i Pi_p PiHat_p

where ``A_p`` is a Kronecker lift of the lower-triangular Toeplitz matrix
``calA_p`` with ``i/2`` on the diagonal and ``i`` below it.  All builders
return dense complex matrices; verification routines return residuals and
leave the pass/fail policy to the caller.
"""

from dataclasses import dataclass

import numpy as np

from .core_linalg import (
    EPS,
    conj_transpose,
    eye,
    kron,
    kron_chain,
    lu_solve,
    norm_max,
    ones_col,
)
from .errors import PoleAtSpectrum, SingularMatrix, NotThreeD
from .structured import (
    TOEPLITZ3D,
    assemble,
    assemble_outer_block,
    block_toeplitz,
    two_level_toeplitz,
)

SPECTRUM = 0.5j  # the only eigenvalue of calA_p; calA_p^* has -i/2


def build_calA(n):
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    j = np.arange(n)
    diff = j[:, None] - j[None, :]
    out = np.where(diff > 0, 1j, 0j)
    out[diff == 0] = 0.5j
    return out.astype(np.complex128)


def _kron_frame(dims, p):
    """Sizes ``(before, n_p, after)`` with ``A_p = I_before (x) calA_p (x) I_after``."""
    m1, m2, m3 = dims
    return {1: (1, m1, m2 * m3), 2: (m1, m2, m3), 3: (m1 * m2, m3, 1)}[p]


def build_A(dims, p):
    before, n, after = _kron_frame(dims, p)
    return kron_chain(eye(before), build_calA(n), eye(after))


def check_pole(z, pole):
    if abs(complex(z) - pole) <= 4 * EPS:
        raise PoleAtSpectrum(f"z = {z} is the eigenvalue {pole} of the operator")


def calA_resolvent(n, z, adjoint=False):
    """Dense ``(calA_n - z I)^{-1}`` (or with ``calA_n^*``) from the small LU solve."""
    pole = -SPECTRUM if adjoint else SPECTRUM
    check_pole(z, pole)
    a = build_calA(n)
    if adjoint:
        a = conj_transpose(a)
    try:
        return lu_solve(a - complex(z) * eye(n), eye(n))
    except SingularMatrix as exc:
        raise PoleAtSpectrum(f"z = {z} is numerically at the pole {pole}") from exc


def resolvent_A(dims, p, z, X, side="left", adjoint=False):
    """Apply ``(A_p - z I)^{-1}`` (``adjoint=True``: ``(A_p^* - z I)^{-1}``) to ``X``.

    ``side="left"`` returns ``R @ X``, ``side="right"`` returns ``X @ R``.
    Only the ``m_p x m_p`` factor is inverted; the Kronecker identity
    factors are applied by reshaping.
    """
    before, n, after = _kron_frame(dims, p)
    small = calA_resolvent(n, z, adjoint=adjoint)
    X = np.asarray(X, dtype=np.complex128)
    m = before * n * after
    if side == "left":
        if X.shape[0] != m:
            raise ValueError(f"left operand needs {m} rows, got {X.shape}")
        c = X.shape[1]
        Xr = X.reshape(before, n, after, c)
        return np.einsum("ij,ajbc->aibc", small, Xr).reshape(m, c)
    if side == "right":
        if X.shape[1] != m:
            raise ValueError(f"right operand needs {m} columns, got {X.shape}")
        c = X.shape[0]
        Xr = X.reshape(c, before, n, after)
        return np.einsum("cajb,ji->caib", Xr, small).reshape(c, m)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def resolvent_product(dims, zs, X, side="left", adjoint=False):
    """``prod_p (A_p - z_p I)^{-1}`` over ``p = 1, 2`` applied to ``X`` (the factors commute)."""
    out = X
    for p, z in zip((1, 2), zs):
        out = resolvent_A(dims, p, z, out, side=side, adjoint=adjoint)
    return out


def row_resolvent_calA(n, z):
    """Closed form of ``1^T (calA_n^* - z I)^{-1}`` as a ``1 x n`` row."""
    z = complex(z)
    check_pole(z, -SPECTRUM)
    d = 2 * z + 1j
    w = (2 * z - 1j) / d
    return (-2.0 / d * w ** np.arange(n)).reshape(1, n).astype(np.complex128)


def col_resolvent_calA(n, z):
    """``(calA_n - z I)^{-1} 1`` as an ``n x 1`` column, the adjoint of the row form at ``conj(z)``."""
    check_pole(z, SPECTRUM)
    return conj_transpose(row_resolvent_calA(n, np.conj(complex(z))))


def _half_cumsum(blocks):
    """``[b0/2, b0/2 + b1, b0/2 + b1 + b2, ...]`` summed left to right."""
    out = []
    acc = None
    for j, b in enumerate(blocks):
        acc = 0.5 * b if j == 0 else acc + b
        out.append(acc)
    return out


@dataclass(frozen=True)
class CouplingSet:
    """The coupling-matrix family attached to one spec.

    Dictionary keys: ``calA``, ``A``, ``Pi``, ``PiHat``, ``Lp`` by ``p``;
    ``M`` by ``(k, p)``; ``K1`` by ``p`` in ``(1, 2)``.  ``M12r``/``M42r``
    hold the blocks ``M_12^(r)`` / ``M_42^(r)`` at index ``r + m1 - 1``.
    """

    dims: object
    class_tag: str
    calA: dict
    A: dict
    M: dict
    Pi: dict
    PiHat: dict
    K1: dict
    K: np.ndarray
    N: np.ndarray
    L: np.ndarray
    Lp: dict
    M12r: np.ndarray
    M42r: np.ndarray

    @property
    def three_d(self):
        return (1, 3) in self.M

    @property
    def ps(self):
        return (1, 2, 3) if self.three_d else (1, 2)


def build_M(spec):
    """Build every coupling matrix for ``spec`` (``p = 3`` only for 3-D Toeplitz specs)."""
    dims = spec.dims
    m1, m2, m3 = dims
    i_m3 = eye(m3)
    M = {}

    calT = {r: assemble_outer_block(spec, r) for r in range(-(m1 - 1), m1)}
    M[1, 1] = np.vstack(_half_cumsum([calT[s] for s in range(m1)]))
    M[2, 1] = kron(ones_col(m1).T, eye(m2 * m3))
    M[3, 1] = conj_transpose(M[2, 1])
    M[4, 1] = np.hstack(_half_cumsum([calT[-s] for s in range(m1)]))

    M12r = np.stack([
        np.vstack(_half_cumsum([spec.block(r, j) for j in range(m2)]))
        for r in range(-(m1 - 1), m1)
    ])
    M42r = np.stack([
        np.hstack(_half_cumsum([spec.block(r, -j) for j in range(m2)]))
        for r in range(-(m1 - 1), m1)
    ])
    M[1, 2] = block_toeplitz(M12r)
    M[2, 2] = kron_chain(eye(m1), ones_col(m2).T, i_m3)
    M[3, 2] = conj_transpose(M[2, 2])
    M[4, 2] = block_toeplitz(M42r)

    def m12(r):
        return M12r[r + m1 - 1]

    def m42(r):
        return M42r[r + m1 - 1]

    K1 = {
        1: np.vstack(_half_cumsum([m42(j) for j in range(m1)])),
        2: np.hstack(_half_cumsum([m12(-j) for j in range(m1)])),
    }
    K = np.hstack(_half_cumsum([m42(-j) for j in range(m1)]))
    N = np.vstack(_half_cumsum([m12(j) for j in range(m1)]))

    if spec.class_tag == TOEPLITZ3D:
        taus = spec.taus()  # (2m1-1, 2m2-1, 2m3-1), index j + m3 - 1
        up = [taus[:, :, m3 - 1 + j] for j in range(m3)]
        down = [taus[:, :, m3 - 1 - j] for j in range(m3)]
        M13 = np.stack(_half_cumsum(up), axis=-1)[..., None]  # (.., m3, 1)
        M43 = np.stack(_half_cumsum(down), axis=-1)[..., None, :]  # (.., 1, m3)
        M[1, 3] = two_level_toeplitz(M13)
        M[2, 3] = kron(eye(m1 * m2), ones_col(m3).T)
        M[3, 3] = conj_transpose(M[2, 3])
        M[4, 3] = two_level_toeplitz(M43)

    ps = (1, 2, 3) if spec.class_tag == TOEPLITZ3D else (1, 2)
    return CouplingSet(
        dims=dims,
        class_tag=spec.class_tag,
        calA={p: build_calA(dims.size(p)) for p in (1, 2, 3)},
        A={p: build_A(dims, p) for p in (1, 2, 3)},
        M=M,
        Pi={p: np.hstack([M[1, p], M[3, p]]) for p in ps},
        PiHat={p: np.vstack([M[2, p], M[4, p]]) for p in ps},
        K1=K1,
        K=K,
        N=N,
        L=kron(ones_col(m1 * m2), i_m3),
        Lp={p: kron(ones_col(dims.size(p)), i_m3) for p in (1, 2)},
        M12r=M12r,
        M42r=M42r,
    )


def _t_scale(T):
    return max(norm_max(T), 1.0)


def verify_identity_T(spec, cs, p, T=None):
    """Relative residual of ``A_p T - T A_p^* = i Pi_p PiHat_p``."""
    if p == 3 and not cs.three_d:
        raise NotThreeD("the third identity needs a 3-D Toeplitz spec")
    if p not in cs.ps:
        raise ValueError(f"p must be one of {cs.ps}, got {p}")
    if T is None:
        T = assemble(spec)
    A = cs.A[p]
    lhs = A @ T - T @ conj_transpose(A)
    return norm_max(lhs - 1j * cs.Pi[p] @ cs.PiHat[p]) / _t_scale(T)


def pi_factor_consistency(cs, p):
    """``Pi_p PiHat_p`` against ``M_1p M_2p + M_3p M_4p``, absolute."""
    M = cs.M
    return norm_max(cs.Pi[p] @ cs.PiHat[p] - (M[1, p] @ M[2, p] + M[3, p] @ M[4, p]))


def q_matrix(cs, k):
    """``Q_k = K_1k K_2k + K_3k K_4k`` with ``K_2k``, ``K_3k`` built from their Kronecker forms."""
    m1, m2, m3 = cs.dims
    if k == 1:
        K2 = kron(ones_col(m1).T, eye(m2 * m3))
    else:
        K2 = kron_chain(eye(m1), ones_col(m2).T, eye(m3))
    K3 = kron(ones_col(cs.dims.size(k)), eye(m3))
    return cs.K1[k] @ K2 + K3 @ cs.K


def verify_identity_M4(spec, cs, k, T=None):
    """Identity for ``M_4p`` (``p`` complementary to ``k``) plus the factored form of ``Q_k``.

    Returns the larger of the two relative residuals.
    """
    if k not in (1, 2):
        raise ValueError(f"k must be 1 or 2, got {k}")
    p = 3 - k
    if T is None:
        T = assemble(spec)
    scale = _t_scale(T)
    m3 = cs.dims.m3
    M4p = cs.M[4, p]
    lhs = kron(cs.calA[k], eye(m3)) @ M4p - M4p @ conj_transpose(cs.A[k])
    Q = q_matrix(cs, k)
    r_identity = norm_max(lhs - 1j * Q) / scale
    Q_factored = cs.K1[k] @ cs.M[2, k] + cs.Lp[k] @ cs.K
    r_factored = norm_max(Q - Q_factored) / scale
    return max(r_identity, r_factored)


def v_matrix(cs, p):
    """``V_p = N Lp^* + M_3p K_1k``."""
    k = 3 - p
    return cs.N @ conj_transpose(cs.Lp[p]) + cs.M[3, p] @ cs.K1[k]


def verify_identity_M1(spec, cs, p, T=None):
    """Relative residual of ``A_p M_1k - M_1k (calA_p^* (x) I) = i V_p``."""
    if p not in (1, 2):
        raise ValueError(f"p must be 1 or 2, got {p}")
    k = 3 - p
    if T is None:
        T = assemble(spec)
    M1k = cs.M[1, k]
    lhs = cs.A[p] @ M1k - M1k @ kron(conj_transpose(cs.calA[p]), eye(cs.dims.m3))
    return norm_max(lhs - 1j * v_matrix(cs, p)) / _t_scale(T)


def verify_inverse_identity(cs, R, p):
    """``R A_p - A_p^* R = i (R Pi_p)(PiHat_p R)``, relative to the largest term."""
    A = cs.A[p]
    left = R @ A
    right = conj_transpose(A) @ R
    lowrank = 1j * (R @ cs.Pi[p]) @ (cs.PiHat[p] @ R)
    scale = max(norm_max(left), norm_max(right), norm_max(lowrank), np.finfo(float).tiny)
    return norm_max(left - right - lowrank) / scale
