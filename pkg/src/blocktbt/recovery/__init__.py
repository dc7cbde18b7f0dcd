"""Inverse-side kernels, their minimal-information reconstruction and class shortcuts."""

from .counts import InfoCount, info_count
from .kernel import (
    InverseData,
    KernelValues,
    alpha,
    beta,
    frak_A,
    invert_and_gamma,
    left_weight,
    omega_direct,
    right_weight,
    theta,
    u_direct,
    u_uhat_direct,
    uhat_direct,
    vartheta,
)
from .minimal import (
    MinimalData,
    build_E,
    build_G,
    e_blocks,
    e_from_g,
    g_blocks,
    l_breve,
    l_hat,
    minimal_from_inverse,
    omega_from_parts,
    omega_min,
    recover_u,
    recover_uhat,
    split_u,
    split_uhat,
)
from .reflection import h_vector, phi, rho_direct, rho_from_omega, rho_identity_closed_form
from .shortcuts import (
    dstu_G21_from_G12,
    dstu_u_from_uhat,
    gamma_hat_transpose_residual,
    j_swap,
    q_factor,
    sa_G21_from_G12,
    sa_pi_residual,
    sa_u_from_uhat,
    u_tilde,
)
