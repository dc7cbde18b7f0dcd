"""Class-specific shortcuts: ``u`` from ``uhat`` and ``G21`` from ``G12``.

DSTU specs (which include 3-D Toeplitz specs) satisfy::

    u_p(mu) = -q(mu) U3 uhat_p(mu)^T Ut_k,    G21 = Ut_1 G12^T Ut_2

and self-adjoint specs satisfy::

    u_p(mu) = uhat_p(conj(mu))^* J_p,
    G21 = -J_2 (G12^* - i diag(L1 L2^*, -L1 L2^*)) J_1

Here ``uhat_p(mu)`` means the defining formula of ``uhat_p`` evaluated at
the point ``mu``.  ``uhat_fn`` arguments are callables ``point -> {1: uhat_1,
2: uhat_2}``, e.g. the direct evaluation or the reconstruction from ``G``.
"""

import numpy as np

from ..core_linalg import EPS, conj_transpose, eye, kron, norm_max, zeros
from ..errors import NotDstu, NotSelfAdjoint, PoleAtSpectrum
from ..structured import DSTU, SELF_ADJOINT, TOEPLITZ3D

DSTU_TAGS = (DSTU, TOEPLITZ3D)


def q_factor(dims, mu):
    out = 1.0 + 0j
    for n, z in zip((dims.m1, dims.m2), mu):
        z = complex(z)
        if abs(z + 0.5j) <= 4 * EPS:
            raise PoleAtSpectrum(f"q has a pole at mu_p = -i/2, got {z}")
        out *= ((z - 0.5j) / (z + 0.5j)) ** n
    return out


def u_tilde(dims, ex, k):
    """``[[0, -U_k (x) U3], [U_k (x) U3, 0]]``."""
    b = kron(ex.by_index(k), ex.U3)
    z0 = zeros(*b.shape)
    return np.block([[z0, -b], [b, z0]])


def j_swap(dims, p):
    """``J_p = [[0, I], [I, 0]]`` with ``I`` of size ``m_k * m3`` (``k`` complementary to ``p``)."""
    n = dims.size(3 - p) * dims.m3
    z0 = zeros(n, n)
    i = eye(n)
    return np.block([[z0, i], [i, z0]])


def _require(cs, tags, exc, strict):
    if strict and cs.class_tag not in tags:
        raise exc(f"spec class {cs.class_tag!r} does not support this relation")


def dstu_u_from_uhat(uhat_fn, cs, ex, mu, p, strict=True):
    _require(cs, DSTU_TAGS, NotDstu, strict)
    k = 3 - p
    uhat_p = uhat_fn(mu)[p]
    return -q_factor(cs.dims, mu) * (ex.U3 @ uhat_p.T @ u_tilde(cs.dims, ex, k))


def dstu_G21_from_G12(G12, cs, ex, strict=True):
    _require(cs, DSTU_TAGS, NotDstu, strict)
    return u_tilde(cs.dims, ex, 1) @ G12.T @ u_tilde(cs.dims, ex, 2)


def gamma_hat_transpose_residual(inv, cs, ex, p):
    """Max-norm residual of ``GammaHat_p^T = U Gamma_p Ut_k + [0, M_3p]``, relative to ``GammaHat_p``."""
    k = 3 - p
    M3p = cs.M[3, p]
    rhs = ex.U @ inv.Gamma[p] @ u_tilde(cs.dims, ex, k) + np.hstack([zeros(*M3p.shape), M3p])
    return norm_max(inv.GammaHat[p].T - rhs) / max(norm_max(inv.GammaHat[p]), np.finfo(float).tiny)


def sa_u_from_uhat(uhat_fn, cs, mu, p, strict=True):
    _require(cs, (SELF_ADJOINT,), NotSelfAdjoint, strict)
    mu_bar = tuple(np.conj(complex(z)) for z in mu)
    return conj_transpose(uhat_fn(mu_bar)[p]) @ j_swap(cs.dims, p)


def sa_G21_from_G12(G12, cs, strict=True):
    _require(cs, (SELF_ADJOINT,), NotSelfAdjoint, strict)
    B = cs.Lp[1] @ conj_transpose(cs.Lp[2])
    zb = zeros(*B.shape)
    correction = 1j * np.block([[B, zb], [zb, -B]])
    return -j_swap(cs.dims, 2) @ (conj_transpose(G12) - correction) @ j_swap(cs.dims, 1)


def sa_pi_residual(cs, p):
    """``|Pi_p - PiHat_p^* J_p|_max``; zero in exact arithmetic and in floating point."""
    return norm_max(cs.Pi[p] - conj_transpose(cs.PiHat[p]) @ j_swap(cs.dims, p))
