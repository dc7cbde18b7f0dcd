"""Verification reports: which checks run for a spec, and how they are judged."""

import json
from dataclasses import dataclass, field


from .core_linalg import norm_max, rel_residual
from .identities import (
    build_M,
    verify_identity_M1,
    verify_identity_M4,
    verify_identity_T,
    verify_inverse_identity,
)
from .recovery import (
    dstu_G21_from_G12,
    dstu_u_from_uhat,
    gamma_hat_transpose_residual,
    invert_and_gamma,
    l_breve,
    l_hat,
    minimal_from_inverse,
    omega_direct,
    omega_from_parts,
    recover_u,
    recover_uhat,
    rho_direct,
    rho_from_omega,
    sa_G21_from_G12,
    sa_pi_residual,
    sa_u_from_uhat,
    split_u,
    split_uhat,
    u_uhat_direct,
)
from .recovery.minimal import MinimalData
from .sampling import PointStream, with_retry
from .structured import (
    DSTU,
    GENERAL,
    SELF_ADJOINT,
    TOEPLITZ3D,
    assemble,
    class_residual,
    exchange_set,
)

DEFAULT_TOLERANCES = {
    "structure": 1e-13,
    "identity": 1e-12,
    "inverse_identity": 1e-11,
    "recovery": 1e-9,
    "annihilator": 1e-11,
    "shortcut_G": 1e-12,
    "transpose_law": 1e-11,
    "exact": 0.0,
}


@dataclass
class RunConfig:
    tolerances: dict = field(default_factory=dict)
    sample_seed: int = 0
    samples: int = 5
    output_format: str = "text"

    def __post_init__(self):
        for name, value in self.tolerances.items():
            if name not in DEFAULT_TOLERANCES:
                raise ValueError(f"unknown tolerance group {name!r}; choose from {sorted(DEFAULT_TOLERANCES)}")
            if not value > 0:
                raise ValueError(f"tolerance {name} must be positive, got {value}")
        if self.samples < 1:
            raise ValueError("sample count must be at least 1")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"output format must be 'text' or 'json', got {self.output_format!r}")

    def tol(self, group):
        return self.tolerances.get(group, DEFAULT_TOLERANCES[group])


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tol: float
    passed: bool

    def as_dict(self):
        return {"name": self.name, "residual": self.residual, "tol": self.tol, "pass": self.passed}


@dataclass
class VerificationReport:
    spec: dict
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, residual, tol):
        residual = float(residual)
        self.checks.append(Check(name, residual, float(tol), bool(residual <= tol)))

    def names(self):
        return [c.name for c in self.checks]

    def as_dict(self):
        return {"spec": dict(self.spec), "checks": [c.as_dict() for c in self.checks], "pass": self.passed}

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2)

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        report = cls(spec=doc["spec"])
        for c in doc["checks"]:
            report.checks.append(Check(c["name"], float(c["residual"]), float(c["tol"]), bool(c["pass"])))
        if report.passed != doc["pass"]:
            raise ValueError("overall verdict disagrees with the individual checks")
        return report

    def to_text(self):
        s = self.spec
        dims = "x".join(str(d) for d in s["dims"])
        lines = [f"spec: dims={dims} class={s['class']} seed={s['seed']}"]
        width = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            verdict = "PASS" if c.passed else "FAIL"
            lines.append(f"  {verdict}  {c.name:<{width}}  residual={c.residual:.3e}  tol={c.tol:.1e}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _summary(spec, config):
    return {"dims": list(spec.dims), "class": spec.class_tag, "seed": config.sample_seed}


def run_verify(spec, config=None):
    """Structure check plus every matrix identity applicable to the spec's class."""
    config = config or RunConfig()
    report = VerificationReport(_summary(spec, config))
    T = assemble(spec)
    if spec.class_tag != GENERAL:
        report.add(f"structure:{spec.class_tag}", class_residual(spec), config.tol("structure"))
    cs = build_M(spec)
    for p in cs.ps:
        report.add(f"identity_T:p{p}", verify_identity_T(spec, cs, p, T), config.tol("identity"))
    for k in (1, 2):
        report.add(f"identity_M4:k{k}", verify_identity_M4(spec, cs, k, T), config.tol("identity"))
    for p in (1, 2):
        report.add(f"identity_M1:p{p}", verify_identity_M1(spec, cs, p, T), config.tol("identity"))
    inv = invert_and_gamma(spec, cs, T)
    for p in (1, 2):
        report.add(f"inverse_identity:p{p}", verify_inverse_identity(cs, inv.R, p), config.tol("inverse_identity"))
    return report


def _minimal_data(inv, cs, ex):
    """Minimal data as the class allows: ``G21`` is rebuilt from ``G12`` for DSTU and self-adjoint specs."""
    md = minimal_from_inverse(inv, cs)
    if cs.class_tag in (DSTU, TOEPLITZ3D):
        G21 = dstu_G21_from_G12(md.G12, cs, ex)
    elif cs.class_tag == SELF_ADJOINT:
        G21 = sa_G21_from_G12(md.G12, cs)
    else:
        return md
    return MinimalData.from_blocks(cs, md.G12, G21, md.K, md.theta, md.vartheta)


def run_recover(spec, config=None):
    """Reconstruction from minimal data compared against the dense-inverse oracle."""
    config = config or RunConfig()
    report = VerificationReport(_summary(spec, config))
    T = assemble(spec)
    cs = build_M(spec)
    inv = invert_and_gamma(spec, cs, T)
    ex = exchange_set(spec.dims)
    md_full = minimal_from_inverse(inv, cs)
    md = _minimal_data(inv, cs, ex)
    rec, ann, shortcut = config.tol("recovery"), config.tol("annihilator"), config.tol("shortcut_G")
    tag = spec.class_tag

    if tag in (DSTU, TOEPLITZ3D):
        report.add("dstu_G21_from_G12", rel_residual(dstu_G21_from_G12(md_full.G12, cs, ex), md_full.G21), shortcut)
        for p in (1, 2):
            report.add(f"dstu_gamma_hat_transpose:p{p}", gamma_hat_transpose_residual(inv, cs, ex, p),
                       config.tol("transpose_law"))
    if tag == SELF_ADJOINT:
        report.add("sa_G21_from_G12", rel_residual(sa_G21_from_G12(md_full.G12, cs), md_full.G21), shortcut)
        for p in (1, 2):
            report.add(f"sa_pi_relation:p{p}", sa_pi_residual(cs, p), config.tol("exact"))

    def uhat_parts(point):
        return split_uhat(cs, recover_uhat(md, cs, point))

    def evaluate(lam, mu):
        uhat = recover_uhat(md, cs, lam)
        u = recover_u(md, cs, mu)
        rows = []
        direct = u_uhat_direct(inv, cs, lam, mu)
        om = omega_direct(inv, cs, lam, mu)
        up, uhp = split_u(cs, u), split_uhat(cs, uhat)
        for p in (1, 2):
            rows.append((f"omega_parts:p{p}", rel_residual(omega_from_parts(direct.u[p], direct.uhat[p], lam[p - 1], mu[p - 1]), om), rec))
        for p in (1, 2):
            rows.append((f"omega_min:p{p}", rel_residual(omega_from_parts(up[p], uhp[p], lam[p - 1], mu[p - 1]), om), rec))
        rows.append(("uhat_recovery", rel_residual(uhat, direct.uhat_full()), rec))
        rows.append(("uhat_annihilator", norm_max(l_hat(cs).conj().T @ uhat), ann))
        rows.append(("u_recovery", rel_residual(u, direct.u_full()), rec))
        rows.append(("u_annihilator", norm_max(u @ l_breve(cs)), ann))
        if tag in (DSTU, TOEPLITZ3D):
            for p in (1, 2):
                rows.append((f"dstu_u_from_uhat:p{p}", rel_residual(dstu_u_from_uhat(uhat_parts, cs, ex, mu, p), direct.u[p]), rec))
        if tag == SELF_ADJOINT:
            for p in (1, 2):
                rows.append((f"sa_u_from_uhat:p{p}", rel_residual(sa_u_from_uhat(uhat_parts, cs, mu, p), direct.u[p]), rec))
        return rows

    stream = PointStream(config.sample_seed)
    for i in range(config.samples):
        rows, _ = with_retry(evaluate, stream, draw="lam_mu")
        x, y = stream.x_y()
        rows.append(("rho_routes", rel_residual(rho_from_omega(inv, cs, x, y), rho_direct(inv, spec.dims, x, y)), rec))
        for name, residual, tol in rows:
            report.add(f"{name}[{i}]", residual, tol)
    return report
