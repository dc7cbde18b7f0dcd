"""Direct evaluation of the inverse-side kernels from the dense inverse.

Everything here uses ``R = T^{-1}`` itself and serves as the reference
against which the minimal-information reconstruction is compared.

Points are pairs ``lam = (lam1, lam2)`` and ``mu = (mu1, mu2)``; ``lam_p``
must avoid ``i/2`` (pole of ``(A_p - lam_p)^{-1}``) and ``mu_p`` must avoid
``-i/2`` (pole of ``(A_p^* - mu_p)^{-1}``).
"""

from dataclasses import dataclass

import numpy as np

from ..core_linalg import conj_transpose, eye, inverse, kron, zeros
from ..errors import SingularMatrix, TNotInvertible
from ..identities import col_resolvent_calA, resolvent_product, row_resolvent_calA
from ..structured import assemble


@dataclass(frozen=True)
class InverseData:
    R: np.ndarray
    Gamma: dict
    GammaHat: dict

    def gamma_full(self):
        return np.hstack([self.Gamma[1], self.Gamma[2]])

    def gamma_hat_full(self):
        return np.vstack([self.GammaHat[1], self.GammaHat[2]])


def invert_and_gamma(spec, cs, T=None):
    if T is None:
        T = assemble(spec)
    try:
        R = inverse(T)
    except SingularMatrix as exc:
        raise TNotInvertible(f"T is singular to working precision: {exc}") from exc
    return InverseData(
        R=R,
        Gamma={p: R @ cs.Pi[p] for p in (1, 2)},
        GammaHat={p: cs.PiHat[p] @ R for p in (1, 2)},
    )


def left_weight(cs, mu):
    """``L^* prod_p (A_p^* - mu_p I)^{-1}``, an ``m3 x m`` matrix."""
    return resolvent_product(cs.dims, mu, conj_transpose(cs.L), side="right", adjoint=True)


def right_weight(cs, lam):
    """``prod_p (A_p - lam_p I)^{-1} L``, an ``m x m3`` matrix."""
    return resolvent_product(cs.dims, lam, cs.L, side="left")


def omega_direct(inv, cs, lam, mu):
    return left_weight(cs, mu) @ inv.R @ right_weight(cs, lam)


def alpha(inv, cs, lam):
    return cs.K @ inv.R @ right_weight(cs, lam)


def beta(inv, cs, mu):
    return left_weight(cs, mu) @ inv.R @ cs.N


def theta(inv, cs, lam):
    return 1j * (eye(cs.dims.m3) + alpha(inv, cs, lam))


def vartheta(inv, cs, mu):
    return -1j * (eye(cs.dims.m3) + beta(inv, cs, mu))


def frak_A(cs, p, z):
    """``diag((calA_p^* - z) (x) I_m3, (calA_p - z) (x) I_m3)``."""
    n = cs.dims.size(p)
    i3 = eye(cs.dims.m3)
    a = cs.calA[p]
    top = kron(conj_transpose(a) - z * eye(n), i3)
    bottom = kron(a - z * eye(n), i3)
    z0 = zeros(*top.shape)
    return np.block([[top, z0], [z0, bottom]])


def _u_correction(cs, p, mu):
    """``-i (1^T (calA_k^* - mu_k)^{-1} (x) I_m3) [I 0]`` with ``k`` complementary to ``p``."""
    k = 3 - p
    n = cs.dims.size(k)
    m3 = cs.dims.m3
    row = kron(row_resolvent_calA(n, mu[k - 1]), eye(m3))
    return -1j * np.hstack([row, zeros(m3, n * m3)])


def _uhat_correction(cs, p, lam):
    """``i [0; (calA_k - lam_k)^{-1} 1 (x) I_m3]``."""
    k = 3 - p
    n = cs.dims.size(k)
    m3 = cs.dims.m3
    col = kron(col_resolvent_calA(n, lam[k - 1]), eye(m3))
    return 1j * np.vstack([zeros(n * m3, m3), col])


@dataclass(frozen=True)
class KernelValues:
    """``u_p``, ``v_p`` at ``mu`` and ``uhat_p``, ``vhat_p`` at ``lam``, keyed by ``p``."""

    u: dict
    v: dict
    uhat: dict
    vhat: dict

    def u_full(self):
        return np.hstack([self.u[1], self.u[2]])

    def uhat_full(self):
        return np.vstack([self.uhat[1], self.uhat[2]])


def u_direct(inv, cs, mu):
    lw = left_weight(cs, mu)
    v = {p: lw @ inv.Gamma[p] for p in (1, 2)}
    u = {p: v[p] + _u_correction(cs, p, mu) for p in (1, 2)}
    return u, v


def uhat_direct(inv, cs, lam):
    rw = right_weight(cs, lam)
    vhat = {p: inv.GammaHat[p] @ rw for p in (1, 2)}
    uhat = {p: vhat[p] + _uhat_correction(cs, p, lam) for p in (1, 2)}
    return uhat, vhat


def u_uhat_direct(inv, cs, lam, mu):
    u, v = u_direct(inv, cs, mu)
    uhat, vhat = uhat_direct(inv, cs, lam)
    return KernelValues(u=u, v=v, uhat=uhat, vhat=vhat)
