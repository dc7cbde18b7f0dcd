"""Matrix reflection coefficient ``rho(x, y) = h(y)^T T^{-1} h(x)``.

``h(x) = h1(x1) (x) h2(x2) (x) I_m3`` with ``h_p(x_p) = (1, x_p, x_p^2, ...)``.
Under the Moebius map ``phi(z) = (i/2)(z + 1)/(z - 1)``::

    rho(x, y) = omega(phi(x1), phi(x2), -phi(y1), -phi(y2))
                / ((x1 - 1)(x2 - 1)(y1 - 1)(y2 - 1))
"""

import numpy as np

from ..core_linalg import eye, kron_chain
from ..errors import PhiPole
from . import kernel


def phi(z):
    z = complex(z)
    if z == 1:
        raise PhiPole("phi has a pole at z = 1")
    return 0.5j * (z + 1) / (z - 1)


def h_vector(dims, x):
    m1, m2, m3 = dims
    h1 = complex(x[0]) ** np.arange(m1)
    h2 = complex(x[1]) ** np.arange(m2)
    return kron_chain(h1.reshape(m1, 1), h2.reshape(m2, 1), eye(m3))


def rho_direct(inv, dims, x, y):
    return h_vector(dims, y).T @ inv.R @ h_vector(dims, x)


def rho_from_omega(inv, cs, x, y, omega=None):
    """``rho`` through ``omega``; ``omega(lam, mu)`` defaults to the direct evaluation."""
    for z in (*x, *y):
        if complex(z) == 1:
            raise PhiPole("x_p and y_p must differ from 1")
    if omega is None:
        def omega(lam, mu):
            return kernel.omega_direct(inv, cs, lam, mu)
    lam = (phi(x[0]), phi(x[1]))
    mu = (-phi(y[0]), -phi(y[1]))
    prefactor = (complex(x[0]) - 1) * (complex(x[1]) - 1) * (complex(y[0]) - 1) * (complex(y[1]) - 1)
    return omega(lam, mu) / prefactor


def rho_identity_closed_form(dims, x, y):
    """Value of ``rho`` for ``T = I``."""
    m1, m2, m3 = dims
    s1 = sum((complex(x[0]) * complex(y[0])) ** i for i in range(m1))
    s2 = sum((complex(x[1]) * complex(y[1])) ** i for i in range(m2))
    return s1 * s2 * eye(m3)
