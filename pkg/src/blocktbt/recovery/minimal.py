"""Reconstruction of ``uhat``, ``u`` and ``omega`` from the minimal data.

The minimal data are the constant blocks ``G12``, ``G21`` (``E12``, ``E21``
follow from them), the ``m3 x m`` row ``K`` and the values of ``theta`` and
``vartheta`` at the sample points.  Whether ``theta`` can itself be derived
from ``G`` is an open question, so the evaluators are carried as part of
the data.

Block layout of ``G(lam)`` and ``E(mu)``: the first ``2*m2*m3`` rows/cols
belong to ``p = 1``, the last ``2*m1*m3`` to ``p = 2``::

    G(lam) = [[G11(lam2), G12], [G21, G22(lam1)]]
"""

from dataclasses import dataclass
from functools import partial
from typing import Callable

import numpy as np

from ..core_linalg import EPS, conj_transpose, eye, kron, lu_solve, solve_right, zeros
from ..errors import DegenerateSamplePair, ESingular, GSingular, SingularMatrix
from ..identities import SPECTRUM, check_pole
from . import kernel


def _cross(cs, a, b):
    """``L_a L_b^*``."""
    return cs.Lp[a] @ conj_transpose(cs.Lp[b])


def g_blocks(inv, cs):
    """``(G12, G21)`` from the inverse."""
    m1, m2, m3 = cs.dims
    P12 = cs.PiHat[1] @ inv.Gamma[2]
    P21 = cs.PiHat[2] @ inv.Gamma[1]
    c12 = np.block([[_cross(cs, 2, 1), zeros(m2 * m3, m1 * m3)], [cs.K1[2], zeros(m2 * m3, m1 * m3)]])
    c21 = np.block([[_cross(cs, 1, 2), zeros(m1 * m3, m2 * m3)], [cs.K1[1], zeros(m1 * m3, m2 * m3)]])
    return 1j * (P12 - c12), 1j * (P21 - c21)


def e_blocks(inv, cs):
    """``(E12, E21)`` from the inverse."""
    m1, m2, m3 = cs.dims
    P12 = cs.PiHat[1] @ inv.Gamma[2]
    P21 = cs.PiHat[2] @ inv.Gamma[1]
    c12 = np.block([[zeros(m2 * m3, m1 * m3), zeros(m2 * m3, m1 * m3)], [cs.K1[2], _cross(cs, 2, 1)]])
    c21 = np.block([[zeros(m1 * m3, m2 * m3), zeros(m1 * m3, m2 * m3)], [cs.K1[1], _cross(cs, 1, 2)]])
    return -1j * (P12 - c12), -1j * (P21 - c21)


def e_from_g(cs, G12, G21):
    """``E12 = -G12 - i diag(L2 L1^*, -L2 L1^*)`` and likewise for ``E21``."""

    def flip(G, a, b):
        B = _cross(cs, a, b)
        zb = zeros(*B.shape)
        return -G - 1j * np.block([[B, zb], [zb, -B]])

    return flip(G12, 2, 1), flip(G21, 1, 2)


@dataclass(frozen=True)
class MinimalData:
    G12: np.ndarray
    G21: np.ndarray
    E12: np.ndarray
    E21: np.ndarray
    K: np.ndarray
    theta: Callable
    vartheta: Callable

    @classmethod
    def from_blocks(cls, cs, G12, G21, K, theta, vartheta):
        E12, E21 = e_from_g(cs, G12, G21)
        return cls(G12, G21, E12, E21, K, theta, vartheta)


def minimal_from_inverse(inv, cs):
    G12, G21 = g_blocks(inv, cs)
    return MinimalData.from_blocks(
        cs, G12, G21, cs.K,
        theta=partial(kernel.theta, inv, cs),
        vartheta=partial(kernel.vartheta, inv, cs),
    )


def _diag2(block):
    z0 = zeros(*block.shape)
    return np.block([[block, z0], [z0, block]])


def build_G(cs, md, lam):
    for z in lam:
        check_pole(z, SPECTRUM)
    m3 = cs.dims.m3
    g11 = _diag2(kron(cs.calA[2] - lam[1] * eye(cs.dims.m2), eye(m3)))
    g22 = _diag2(kron(cs.calA[1] - lam[0] * eye(cs.dims.m1), eye(m3)))
    return np.block([[g11, md.G12], [md.G21, g22]])


def build_E(cs, md, mu):
    for z in mu:
        check_pole(z, -SPECTRUM)
    m3 = cs.dims.m3
    e11 = _diag2(kron(conj_transpose(cs.calA[2]) - mu[1] * eye(cs.dims.m2), eye(m3)))
    e22 = _diag2(kron(conj_transpose(cs.calA[1]) - mu[0] * eye(cs.dims.m1), eye(m3)))
    return np.block([[e11, md.E12], [md.E21, e22]])


def uhat_rhs(cs):
    """``col[0, L2, 0, L1]``."""
    m1, m2, m3 = cs.dims
    return np.vstack([zeros(m2 * m3, m3), cs.Lp[2], zeros(m1 * m3, m3), cs.Lp[1]])


def u_lhs(cs):
    """``[L2^*, 0, L1^*, 0]``."""
    m1, m2, m3 = cs.dims
    return np.hstack([
        conj_transpose(cs.Lp[2]), zeros(m3, m2 * m3),
        conj_transpose(cs.Lp[1]), zeros(m3, m1 * m3),
    ])


def l_hat(cs):
    """``col[L2, 0, -L1, 0]``, annihilates ``uhat`` from the left."""
    m1, m2, m3 = cs.dims
    return np.vstack([cs.Lp[2], zeros(m2 * m3, m3), -cs.Lp[1], zeros(m1 * m3, m3)])


def l_breve(cs):
    """``col[0, L2, 0, -L1]``, annihilates ``u`` from the right."""
    m1, m2, m3 = cs.dims
    return np.vstack([zeros(m2 * m3, m3), cs.Lp[2], zeros(m1 * m3, m3), -cs.Lp[1]])


def split_uhat(cs, uhat):
    h = 2 * cs.dims.m2 * cs.dims.m3
    return {1: uhat[:h], 2: uhat[h:]}


def split_u(cs, u):
    w = 2 * cs.dims.m2 * cs.dims.m3
    return {1: u[:, :w], 2: u[:, w:]}


def recover_uhat(md, cs, lam):
    """``uhat(lam) = G(lam)^{-1} col[0, L2, 0, L1] theta(lam)``."""
    G = build_G(cs, md, lam)
    try:
        return lu_solve(G, uhat_rhs(cs) @ md.theta(lam))
    except SingularMatrix as exc:
        raise GSingular(f"G(lam) is singular at lam = {lam}") from exc


def recover_u(md, cs, mu):
    """``u(mu) = vartheta(mu) [L2^*, 0, L1^*, 0] E(mu)^{-1}``."""
    E = build_E(cs, md, mu)
    try:
        return solve_right(E, md.vartheta(mu) @ u_lhs(cs))
    except SingularMatrix as exc:
        raise ESingular(f"E(mu) is singular at mu = {mu}") from exc


def omega_from_parts(u_p, uhat_p, lam_p, mu_p):
    d = complex(lam_p) - complex(mu_p)
    if abs(d) <= 4 * EPS * max(1.0, abs(lam_p)):
        raise DegenerateSamplePair(f"lam_p == mu_p == {lam_p}")
    return 1j / d * (u_p @ uhat_p)


def omega_min(md, cs, lam, mu, p):
    """``omega`` from the recovered ``u`` and ``uhat`` only."""
    if abs(complex(lam[p - 1]) - complex(mu[p - 1])) <= 4 * EPS * max(1.0, abs(lam[p - 1])):
        raise DegenerateSamplePair(f"lam_{p} == mu_{p} == {lam[p - 1]}")
    uhat = split_uhat(cs, recover_uhat(md, cs, lam))
    u = split_u(cs, recover_u(md, cs, mu))
    return omega_from_parts(u[p], uhat[p], lam[p - 1], mu[p - 1])
