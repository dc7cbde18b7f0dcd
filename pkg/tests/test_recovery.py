import numpy as np
import pytest

from blocktbt.core_linalg import conj_transpose, norm_max, rel_residual
from blocktbt.errors import (
    DegenerateSamplePair,
    GSingular,
    NotDstu,
    NotSelfAdjoint,
    PhiPole,
    TNotInvertible,
)
from blocktbt.identities import build_M
from blocktbt.recovery import (
    alpha,
    beta,
    build_E,
    build_G,
    dstu_G21_from_G12,
    dstu_u_from_uhat,
    e_blocks,
    e_from_g,
    g_blocks,
    gamma_hat_transpose_residual,
    info_count,
    invert_and_gamma,
    j_swap,
    l_breve,
    l_hat,
    minimal_from_inverse,
    omega_direct,
    omega_from_parts,
    omega_min,
    phi,
    q_factor,
    recover_u,
    recover_uhat,
    rho_direct,
    rho_from_omega,
    rho_identity_closed_form,
    sa_G21_from_G12,
    sa_pi_residual,
    sa_u_from_uhat,
    theta,
    u_direct,
    u_tilde,
    u_uhat_direct,
    uhat_direct,
    vartheta,
)
from blocktbt.sampling import PointStream, lam_mu_pairs, with_retry
from blocktbt.structured import (
    CLASSES,
    DSTU,
    GENERAL,
    SELF_ADJOINT,
    TOEPLITZ3D,
    BlockTbtSpec,
    DimTriple,
    assemble,
    exchange_set,
    identity_spec,
    random_spec,
)

DIMS = [DimTriple(2, 2, 2), DimTriple(3, 2, 2), DimTriple(2, 3, 3), DimTriple(3, 3, 2)]


def setup(dims, seed, class_tag=GENERAL):
    spec = random_spec(dims, seed, class_tag)
    cs = build_M(spec)
    return spec, cs, invert_and_gamma(spec, cs)


def dense_weights(cs, lam, mu):
    m = cs.dims.m
    I = np.eye(m)
    left = conj_transpose(cs.L)
    for p in (1, 2):
        left = left @ np.linalg.inv(conj_transpose(cs.A[p]) - mu[p - 1] * I)
    right = cs.L
    for p in (1, 2):
        right = np.linalg.inv(cs.A[p] - lam[p - 1] * I) @ right
    return left, right


def dense_u(inv, cs, mu):
    """Kernel ``u_p`` built from dense inverses only."""
    m3 = cs.dims.m3
    left, _ = dense_weights(cs, (0, 0), mu)
    out = {}
    for p in (1, 2):
        k = 3 - p
        n = cs.dims.size(k)
        a_star = conj_transpose(cs.calA[k])
        row = np.ones((1, n)) @ np.linalg.inv(a_star - mu[k - 1] * np.eye(n))
        corr = -1j * np.hstack([np.kron(row, np.eye(m3)), np.zeros((m3, n * m3))])
        out[p] = left @ inv.R @ cs.Pi[p] + corr
    return out


def dense_left(cs, mu):
    return dense_weights(cs, (0, 0), mu)[0]


def test_identity_inverse_data():
    spec = identity_spec(DimTriple(2, 2, 2))
    cs = build_M(spec)
    inv = invert_and_gamma(spec, cs)
    assert np.array_equal(inv.R, np.eye(8))
    for p in (1, 2):
        assert np.array_equal(inv.Gamma[p], cs.Pi[p])
        assert np.array_equal(inv.GammaHat[p], cs.PiHat[p])


@pytest.mark.parametrize("class_tag", CLASSES)
def test_inverse_oracle(class_tag):
    spec, cs, inv = setup(DimTriple(3, 2, 2), 3, class_tag)
    T = assemble(spec)
    assert norm_max(T @ inv.R - np.eye(T.shape[0])) <= 1e-11
    for p in (1, 2):
        for k in (1, 2):
            a = inv.GammaHat[p] @ cs.Pi[k]
            b = cs.PiHat[p] @ inv.Gamma[k]
            assert rel_residual(a, b) <= 1e-12


def test_singular_T():
    dims = DimTriple(2, 2, 2)
    spec = BlockTbtSpec(dims, np.zeros((3, 3, 2, 2), dtype=complex))
    with pytest.raises(TNotInvertible):
        invert_and_gamma(spec, build_M(spec))


def test_omega_identity_at_origin():
    spec = identity_spec(DimTriple(2, 2, 2))
    cs = build_M(spec)
    inv = invert_and_gamma(spec, cs)
    A1, A2 = cs.A[1], cs.A[2]
    inv_ = np.linalg.inv
    expected = conj_transpose(cs.L) @ inv_(conj_transpose(A1)) @ inv_(conj_transpose(A2)) @ inv_(A1) @ inv_(A2) @ cs.L
    om = omega_direct(inv, cs, (0, 0), (0, 0))
    assert om.shape == (2, 2)
    assert rel_residual(om, expected) <= 1e-12


@pytest.mark.parametrize("dims", DIMS)
def test_omega_scaling(dims):
    spec, cs, inv = setup(dims, 1)
    c = 2.5 - 1.5j
    spec_c = spec.scaled(c)
    cs_c = build_M(spec_c)
    inv_c = invert_and_gamma(spec_c, cs_c)
    (lam, mu), = lam_mu_pairs(4, 1)
    om = omega_direct(inv, cs, lam, mu)
    assert om.shape == (dims.m3, dims.m3)
    assert rel_residual(omega_direct(inv_c, cs_c, lam, mu), om / c) <= 1e-12


@pytest.mark.parametrize("spec_kind", ["identity", "random"])
def test_u_direct_vs_dense(spec_kind):
    dims = DimTriple(2, 3, 2)
    spec = identity_spec(dims) if spec_kind == "identity" else random_spec(dims, 6)
    cs = build_M(spec)
    inv = invert_and_gamma(spec, cs)
    mu = (0.2 - 0.1j, -0.3 + 0.2j)
    u, v = u_direct(inv, cs, mu)
    ref = dense_u(inv, cs, mu)
    for p in (1, 2):
        assert rel_residual(u[p], ref[p]) <= 1e-12
        assert rel_residual(v[p], dense_left(cs, mu) @ inv.R @ cs.Pi[p]) <= 1e-12


def test_uhat_height():
    dims = DimTriple(3, 2, 2)
    _, cs, inv = setup(dims, 1)
    uhat, _ = uhat_direct(inv, cs, (0.1, 0.2j))
    assert np.vstack([uhat[1], uhat[2]]).shape == (2 * (3 + 2) * 2, 2)


@pytest.mark.parametrize("dims", DIMS)
@pytest.mark.parametrize("class_tag", CLASSES)
def test_three_way_omega(dims, class_tag):
    _, cs, inv = setup(dims, 2, class_tag)
    for lam, mu in lam_mu_pairs(7, 5):
        kv = u_uhat_direct(inv, cs, lam, mu)
        om = omega_direct(inv, cs, lam, mu)
        for p in (1, 2):
            route = omega_from_parts(kv.u[p], kv.uhat[p], lam[p - 1], mu[p - 1])
            assert rel_residual(route, om) <= 1e-10


def test_G_diagonal_blocks():
    dims = DimTriple(3, 2, 2)
    _, cs, inv = setup(dims, 1)
    md = minimal_from_inverse(inv, cs)
    lam = (0.2, -0.1j)
    G = build_G(cs, md, lam)
    h = dims.m2 * dims.m3
    g = np.kron(cs.calA[2] - lam[1] * np.eye(2), np.eye(2))
    assert np.array_equal(G[:h, :h], g)
    assert np.array_equal(G[h:2 * h, h:2 * h], g)
    assert np.array_equal(G[:h, h:2 * h], np.zeros((h, h)))
    w = dims.m1 * dims.m3
    g2 = np.kron(cs.calA[1] - lam[0] * np.eye(3), np.eye(2))
    assert np.array_equal(G[2 * h:2 * h + w, 2 * h:2 * h + w], g2)
    assert np.array_equal(G[2 * h + w:, 2 * h + w:], g2)


def test_identity_G21_by_hand():
    dims = DimTriple(2, 2, 2)
    spec = identity_spec(dims)
    cs = build_M(spec)
    inv = invert_and_gamma(spec, cs)
    _, G21 = g_blocks(inv, cs)
    M = cs.M
    prod = np.block([[M[2, 2] @ M[1, 1], M[2, 2] @ M[3, 1]], [M[4, 2] @ M[1, 1], M[4, 2] @ M[3, 1]]])
    L1L2 = cs.Lp[1] @ conj_transpose(cs.Lp[2])
    z = np.zeros((4, 4))
    expected = 1j * (prod - np.block([[L1L2, z], [cs.K1[1], z]]))
    assert np.array_equal(G21, expected)


@pytest.mark.parametrize("class_tag", CLASSES)
def test_E_from_G(class_tag):
    _, cs, inv = setup(DimTriple(2, 3, 2), 5, class_tag)
    G12, G21 = g_blocks(inv, cs)
    E12, E21 = e_blocks(inv, cs)
    F12, F21 = e_from_g(cs, G12, G21)
    assert rel_residual(F12, E12) <= 1e-14
    assert rel_residual(F21, E21) <= 1e-14


def test_theta_definitions():
    _, cs, inv = setup(DimTriple(2, 2, 3), 3)
    lam, mu = (0.3 + 0.1j, -0.2), (-0.1, 0.25j)
    I3 = np.eye(3)
    assert np.array_equal(theta(inv, cs, lam), 1j * (I3 + alpha(inv, cs, lam)))
    assert np.array_equal(vartheta(inv, cs, mu), -1j * (I3 + beta(inv, cs, mu)))


def test_alpha_identity_spec():
    spec = identity_spec(DimTriple(2, 2, 2))
    cs = build_M(spec)
    inv = invert_and_gamma(spec, cs)
    lam = (0.3 + 0.1j, -0.2)
    _, right = dense_weights(cs, lam, (0, 0))
    assert rel_residual(alpha(inv, cs, lam), cs.K @ right) <= 1e-12


@pytest.mark.parametrize("spec_kind,tol", [("random", 1e-9), ("identity", 1e-12)])
def test_recover_uhat_example(spec_kind, tol):
    dims = DimTriple(2, 2, 2)
    spec = random_spec(dims, 0) if spec_kind == "random" else identity_spec(dims)
    cs = build_M(spec)
    inv = invert_and_gamma(spec, cs)
    md = minimal_from_inverse(inv, cs)
    lam = (0.3 + 0.1j, -0.2)
    uhat = recover_uhat(md, cs, lam)
    ref, _ = uhat_direct(inv, cs, lam)
    assert rel_residual(uhat, np.vstack([ref[1], ref[2]])) <= tol
    assert norm_max(conj_transpose(l_hat(cs)) @ uhat) <= 1e-11


@pytest.mark.parametrize("spec_kind,tol", [("random", 1e-9), ("identity", 1e-12)])
def test_recover_u_example(spec_kind, tol):
    dims = DimTriple(2, 2, 2)
    spec = random_spec(dims, 0) if spec_kind == "random" else identity_spec(dims)
    cs = build_M(spec)
    inv = invert_and_gamma(spec, cs)
    md = minimal_from_inverse(inv, cs)
    mu = (-0.1, 0.25j)
    u = recover_u(md, cs, mu)
    ref, _ = u_direct(inv, cs, mu)
    assert rel_residual(u, np.hstack([ref[1], ref[2]])) <= tol
    assert norm_max(u @ l_breve(cs)) <= 1e-11


def test_E_is_built_from_adjoint_blocks():
    dims = DimTriple(2, 2, 2)
    _, cs, inv = setup(dims, 0)
    md = minimal_from_inverse(inv, cs)
    E = build_E(cs, md, (0.1, 0.2))
    e11 = np.kron(conj_transpose(cs.calA[2]) - 0.2 * np.eye(2), np.eye(2))
    assert np.array_equal(E[:4, :4], e11)


@pytest.mark.parametrize("dims", DIMS)
@pytest.mark.parametrize("class_tag", CLASSES)
def test_omega_min(dims, class_tag):
    _, cs, inv = setup(dims, 9, class_tag)
    md = minimal_from_inverse(inv, cs)
    for lam, mu in lam_mu_pairs(3, 3):
        om = omega_direct(inv, cs, lam, mu)
        o1 = omega_min(md, cs, lam, mu, 1)
        o2 = omega_min(md, cs, lam, mu, 2)
        assert rel_residual(o1, om) <= 1e-9
        assert rel_residual(o2, om) <= 1e-9
        assert rel_residual(o1, o2) <= 1e-9


def test_omega_parts_scaling_invariance():
    _, cs, inv = setup(DimTriple(2, 2, 2), 1)
    lam, mu = (0.3, 0.2j), (-0.1, 0.4)
    kv = u_uhat_direct(inv, cs, lam, mu)
    c = 3.0 - 2.0j
    a = omega_from_parts(kv.u[1], kv.uhat[1], lam[0], mu[0])
    b = omega_from_parts(c * kv.u[1], kv.uhat[1] / c, lam[0], mu[0])
    assert rel_residual(a, b) <= 1e-15


def test_degenerate_pair():
    _, cs, inv = setup(DimTriple(2, 2, 2), 1)
    md = minimal_from_inverse(inv, cs)
    with pytest.raises(DegenerateSamplePair):
        omega_min(md, cs, (0.3, 0.1), (0.3, 0.2), 1)


@pytest.mark.parametrize("dims", DIMS)
@pytest.mark.parametrize("class_tag", CLASSES)
def test_cross_relation(dims, class_tag):
    _, cs, inv = setup(dims, 12, class_tag)
    for lam, mu in lam_mu_pairs(12, 3):
        kv = u_uhat_direct(inv, cs, lam, mu)
        a = (lam[1] - mu[1]) * kv.u[1] @ kv.uhat[1]
        b = (lam[0] - mu[0]) * kv.u[2] @ kv.uhat[2]
        assert rel_residual(a, b) <= 1e-9


def test_phi_values():
    assert phi(-1) == 0
    assert phi(0) == -0.5j
    with pytest.raises(PhiPole):
        phi(1)


@pytest.mark.parametrize("dims", DIMS)
def test_rho_identity(dims):
    spec = identity_spec(dims)
    cs = build_M(spec)
    inv = invert_and_gamma(spec, cs)
    x, y = (0.4, -0.3), (0.2j, 0.5)
    closed = rho_identity_closed_form(dims, x, y)
    assert rel_residual(rho_direct(inv, dims, x, y), closed) <= 1e-13
    assert rel_residual(rho_from_omega(inv, cs, x, y), closed) <= 1e-13


@pytest.mark.parametrize("class_tag", CLASSES)
def test_rho_routes(class_tag):
    spec, cs, inv = setup(DimTriple(2, 3, 2), 4, class_tag)
    x, y = (0.4, -0.3), (0.2j, 0.5)
    assert rel_residual(rho_from_omega(inv, cs, x, y), rho_direct(inv, spec.dims, x, y)) <= 1e-9


def test_rho_rejects_one():
    spec, cs, inv = setup(DimTriple(2, 2, 2), 4)
    with pytest.raises(PhiPole):
        rho_from_omega(inv, cs, (1, 0.2), (0.1, 0.1))


@pytest.mark.parametrize("dims", DIMS)
def test_q_at_origin(dims):
    assert q_factor(dims, (0, 0)) == pytest.approx((-1) ** (dims.m1 + dims.m2), abs=1e-15)


@pytest.mark.parametrize("dims", DIMS)
def test_u_tilde_and_j_squares(dims):
    ex = exchange_set(dims)
    for k in (1, 2):
        Ut = u_tilde(dims, ex, k)
        assert np.array_equal(Ut @ Ut, -np.eye(Ut.shape[0]))
        J = j_swap(dims, k)
        assert np.array_equal(J @ J, np.eye(J.shape[0]))


@pytest.mark.parametrize("dims", DIMS)
@pytest.mark.parametrize("class_tag", [DSTU, TOEPLITZ3D])
def test_dstu_shortcuts(dims, class_tag):
    _, cs, inv = setup(dims, 5, class_tag)
    ex = exchange_set(dims)

    def uhat_fn(point):
        return uhat_direct(inv, cs, point)[0]

    for _, mu in lam_mu_pairs(5, 5):
        u, _ = u_direct(inv, cs, mu)
        for p in (1, 2):
            assert rel_residual(dstu_u_from_uhat(uhat_fn, cs, ex, mu, p), u[p]) <= 1e-9
    G12, G21 = g_blocks(inv, cs)
    assert rel_residual(dstu_G21_from_G12(G12, cs, ex), G21) <= 1e-12
    for p in (1, 2):
        assert gamma_hat_transpose_residual(inv, cs, ex, p) <= 1e-11


def test_dstu_negative_control():
    failures = 0
    for seed in range(10):
        _, cs, inv = setup(DimTriple(2, 2, 2), seed, GENERAL)
        ex = exchange_set(cs.dims)
        G12, G21 = g_blocks(inv, cs)
        if rel_residual(dstu_G21_from_G12(G12, cs, ex, strict=False), G21) > 1e-3:
            failures += 1
    assert failures >= 9


def test_dstu_requires_tag():
    _, cs, inv = setup(DimTriple(2, 2, 2), 1, GENERAL)
    G12, _ = g_blocks(inv, cs)
    with pytest.raises(NotDstu):
        dstu_G21_from_G12(G12, cs, exchange_set(cs.dims))
    with pytest.raises(NotSelfAdjoint):
        sa_G21_from_G12(G12, cs)


@pytest.mark.parametrize("dims", DIMS)
def test_self_adjoint_shortcuts(dims):
    _, cs, inv = setup(dims, 5, SELF_ADJOINT)

    def uhat_fn(point):
        return uhat_direct(inv, cs, point)[0]

    for _, mu in lam_mu_pairs(6, 5):
        u, _ = u_direct(inv, cs, mu)
        for p in (1, 2):
            assert rel_residual(sa_u_from_uhat(uhat_fn, cs, mu, p), u[p]) <= 1e-9
    G12, G21 = g_blocks(inv, cs)
    assert rel_residual(sa_G21_from_G12(G12, cs), G21) <= 1e-12
    for p in (1, 2):
        assert sa_pi_residual(cs, p) == 0.0


@pytest.mark.parametrize("class_tag", [DSTU, SELF_ADJOINT])
def test_shortcuts_from_recovered_uhat(class_tag):
    _, cs, inv = setup(DimTriple(3, 2, 2), 8, class_tag)
    md = minimal_from_inverse(inv, cs)
    ex = exchange_set(cs.dims)

    def uhat_fn(point):
        uh = recover_uhat(md, cs, point)
        h = 2 * cs.dims.m2 * cs.dims.m3
        return {1: uh[:h], 2: uh[h:]}

    mu = (-0.1, 0.25j)
    u, _ = u_direct(inv, cs, mu)
    for p in (1, 2):
        if class_tag == DSTU:
            got = dstu_u_from_uhat(uhat_fn, cs, ex, mu, p)
        else:
            got = sa_u_from_uhat(uhat_fn, cs, mu, p)
        assert rel_residual(got, u[p]) <= 1e-9


@pytest.mark.parametrize("dims,class_tag,full,minimal,naive", [
    (DimTriple(2, 2, 2), TOEPLITZ3D, 27, 80, {1: 128, 2: 128, 3: 128}),
    (DimTriple(4, 4, 2), TOEPLITZ3D, 147, 320, {1: 1024, 2: 1024, 3: 2048}),
    (DimTriple(2, 2, 2), GENERAL, 36, 80, {1: 128, 2: 128}),
    (DimTriple(10, 10, 2), TOEPLITZ3D, 1083, 2000, {1: 16000, 2: 16000, 3: 80000}),
])
def test_info_count(dims, class_tag, full, minimal, naive):
    c = info_count(dims, class_tag)
    assert c.full_T_entries == full
    assert c.minimal_entries == minimal
    assert c.naive_recovery_entries == naive


def test_point_stream_policy():
    stream = PointStream(99)
    for _ in range(200):
        z = stream.point()
        assert 0.1 <= abs(z) <= 0.6 + 1e-15
        assert min(abs(z - 0.5j), abs(z + 0.5j), abs(z - 1)) >= 1e-3
    for lam, mu in lam_mu_pairs(3, 50):
        assert all(abs(a - b) >= 1e-3 for a, b in zip(lam, mu))


def test_point_stream_deterministic():
    assert lam_mu_pairs(5, 3) == lam_mu_pairs(5, 3)


def test_retry_moves_to_next_point():
    calls = []

    def flaky(lam, mu):
        calls.append(lam)
        if len(calls) < 3:
            raise GSingular("singular")
        return "ok"

    result, point = with_retry(flaky, PointStream(1))
    assert result == "ok"
    assert len(calls) == 3
    assert point[0] == calls[-1]


def test_retry_gives_up():
    def always(lam, mu):
        raise GSingular("singular")

    with pytest.raises(GSingular):
        with_retry(always, PointStream(1), attempts=8)
