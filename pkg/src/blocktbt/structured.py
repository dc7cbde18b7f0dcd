"""Block Toeplitz-block-Toeplitz matrices and their structure classes.

A block TBT matrix of dimensions ``(m1, m2, m3)`` is the ``m x m`` matrix
(``m = m1*m2*m3``) whose outer ``m1 x m1`` block layout is Toeplitz in the
blocks ``T_r``, each ``T_r`` being itself an ``m2 x m2`` block Toeplitz
matrix of ``m3 x m3`` blocks ``t_s^(r)``.  Row ``alpha`` of the assembled
matrix decodes as ``alpha = i*m2*m3 + i2*m3 + a`` (0-based) and

    T[alpha, beta] = t^(i-k)_(i2-k2)[a, b].

Coefficients are stored densely in an array of shape
``(2*m1-1, 2*m2-1, m3, m3)`` indexed by ``(r + m1 - 1, s + m2 - 1)``.

Four classes are distinguished:

* ``general``       - no constraint beyond the layout;
* ``self_adjoint``  - ``(t_s^(r))^* == t_(-s)^(-r)``, i.e. ``T == T^*``;
* ``dstu``          - ``U3 t_s^(r) U3 == (t_s^(r))^T`` with ``U3`` the exchange matrix;
* ``toeplitz3d``    - every ``t_s^(r)`` is itself a scalar Toeplitz matrix.
"""

from dataclasses import dataclass, field

import numpy as np

from .core_linalg import kron_chain
from .errors import SpecIncomplete
from .rng import XorShift64Star

GENERAL = "general"
SELF_ADJOINT = "self_adjoint"
DSTU = "dstu"
TOEPLITZ3D = "toeplitz3d"
CLASSES = (GENERAL, SELF_ADJOINT, DSTU, TOEPLITZ3D)

STRUCTURE_TOL = 1e-13


@dataclass(frozen=True)
class DimTriple:
    m1: int
    m2: int
    m3: int

    def __post_init__(self):
        for name in ("m1", "m2", "m3"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if value < 2:
                raise ValueError(f"{name} must be >= 2, got {value}")
            object.__setattr__(self, name, int(value))

    @classmethod
    def parse(cls, text):
        """Parse ``"m1,m2,m3"``."""
        parts = [p.strip() for p in str(text).split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three comma-separated integers, got {text!r}")
        return cls(*(int(p) for p in parts))

    @property
    def m(self):
        return self.m1 * self.m2 * self.m3

    def size(self, p):
        return (self.m1, self.m2, self.m3)[p - 1]

    def __iter__(self):
        return iter((self.m1, self.m2, self.m3))


def _readonly(a):
    a = np.array(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class BlockTbtSpec:
    dims: DimTriple
    coeffs: np.ndarray = field(repr=False)
    class_tag: str = GENERAL

    def __post_init__(self):
        if self.class_tag not in CLASSES:
            raise ValueError(f"unknown structure class {self.class_tag!r}")
        m1, m2, m3 = self.dims
        expected = (2 * m1 - 1, 2 * m2 - 1, m3, m3)
        coeffs = np.asarray(self.coeffs)
        if coeffs.shape != expected:
            raise SpecIncomplete(
                f"coefficient array has shape {coeffs.shape}, expected {expected}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", _readonly(coeffs))

    @classmethod
    def from_blocks(cls, dims, blocks, class_tag=GENERAL):
        """Build from a mapping ``(r, s) -> m3 x m3 block``; every key must be present."""
        m1, m2, m3 = dims
        coeffs = np.zeros((2 * m1 - 1, 2 * m2 - 1, m3, m3), dtype=np.complex128)
        for r in range(-(m1 - 1), m1):
            for s in range(-(m2 - 1), m2):
                if (r, s) not in blocks:
                    raise SpecIncomplete(f"missing coefficient block t_{s}^({r})")
                block = np.asarray(blocks[r, s], dtype=np.complex128)
                if block.shape != (m3, m3):
                    raise SpecIncomplete(
                        f"block t_{s}^({r}) has shape {block.shape}, expected {(m3, m3)}"
                    )
                coeffs[r + m1 - 1, s + m2 - 1] = block
        return cls(dims, coeffs, class_tag)

    def block(self, r, s):
        """The ``m3 x m3`` coefficient ``t_s^(r)``."""
        return self.coeffs[r + self.dims.m1 - 1, s + self.dims.m2 - 1]

    def with_class(self, class_tag):
        return BlockTbtSpec(self.dims, self.coeffs, class_tag)

    def scaled(self, c):
        return BlockTbtSpec(self.dims, complex(c) * self.coeffs, self.class_tag)

    def taus(self):
        """Recover ``tau_j^(r,s)`` from Toeplitz inner blocks (first column and first row)."""
        c = self.coeffs
        # index j + m3 - 1 for j in [-(m3-1), m3-1]
        neg = c[:, :, 0, :0:-1]  # t[0, b] = tau_{-b}, b = m3-1..1
        pos = c[:, :, :, 0]  # t[a, 0] = tau_a
        return np.concatenate([neg, pos], axis=2)


@dataclass(frozen=True)
class Toeplitz3dSpec:
    dims: DimTriple
    taus: np.ndarray = field(repr=False)

    def __post_init__(self):
        m1, m2, m3 = self.dims
        expected = (2 * m1 - 1, 2 * m2 - 1, 2 * m3 - 1)
        taus = np.asarray(self.taus)
        if taus.shape != expected:
            raise SpecIncomplete(f"tau array has shape {taus.shape}, expected {expected}")
        object.__setattr__(self, "taus", _readonly(taus))

    def tau(self, r, s, j):
        m1, m2, m3 = self.dims
        return self.taus[r + m1 - 1, s + m2 - 1, j + m3 - 1]


@dataclass(frozen=True)
class ExchangeSet:
    U1: np.ndarray
    U2: np.ndarray
    U3: np.ndarray
    U: np.ndarray

    def by_index(self, p):
        return (self.U1, self.U2, self.U3)[p - 1]


def exchange(n):
    """The ``n x n`` anti-identity."""
    return np.fliplr(np.eye(n, dtype=np.complex128))


def exchange_set(dims):
    u1, u2, u3 = (exchange(n) for n in dims)
    return ExchangeSet(u1, u2, u3, kron_chain(u1, u2, u3))


def block_toeplitz(blocks):
    """One-level block Toeplitz matrix from ``blocks[r + n - 1]``, ``r = i - k``."""
    blocks = np.asarray(blocks)
    n = (blocks.shape[0] + 1) // 2
    h, w = blocks.shape[1:]
    idx = np.arange(n)
    rix = idx[:, None] - idx[None, :] + n - 1
    return blocks[rix].transpose(0, 2, 1, 3).reshape(n * h, n * w)


def two_level_toeplitz(blocks):
    """Two-level block Toeplitz matrix from ``blocks[r + n1 - 1, s + n2 - 1]``.

    Outer index ``r = i - k`` runs over ``n1 x n1`` blocks and inner index
    ``s = i2 - k2`` over ``n2 x n2`` sub-blocks of shape ``blocks.shape[2:]``.
    """
    blocks = np.asarray(blocks)
    n1 = (blocks.shape[0] + 1) // 2
    n2 = (blocks.shape[1] + 1) // 2
    h, w = blocks.shape[2:]
    i1 = np.arange(n1)
    i2 = np.arange(n2)
    rix = i1[:, None] - i1[None, :] + n1 - 1
    six = i2[:, None] - i2[None, :] + n2 - 1
    # axes (i, i2, k, k2, a, b)
    full = blocks[rix[:, None, :, None], six[None, :, None, :]]
    return full.transpose(0, 1, 4, 2, 3, 5).reshape(n1 * n2 * h, n1 * n2 * w)


def assemble(spec):
    return two_level_toeplitz(spec.coeffs)


def assemble_outer_block(spec, r):
    """The ``m2*m3``-square block ``T_r``."""
    return block_toeplitz(spec.coeffs[r + spec.dims.m1 - 1])


def lift_3d(spec3):
    m3 = spec3.dims.m3
    a = np.arange(m3)
    jix = a[:, None] - a[None, :] + m3 - 1
    coeffs = spec3.taus[:, :, jix]
    return BlockTbtSpec(spec3.dims, coeffs, TOEPLITZ3D)


def identity_spec(dims, class_tag=GENERAL):
    m1, m2, m3 = dims
    coeffs = np.zeros((2 * m1 - 1, 2 * m2 - 1, m3, m3), dtype=np.complex128)
    coeffs[m1 - 1, m2 - 1] = np.eye(m3)
    return BlockTbtSpec(dims, coeffs, class_tag)


def default_shift(coeffs, dims):
    """``2 * m * max|t|``: makes the assembled matrix strictly row diagonally dominant."""
    return 2.0 * dims.m * float(np.max(np.abs(coeffs)))


def random_spec(dims, seed, class_tag=GENERAL, shift=None):
    """Deterministic random spec of the requested class.

    Draw order: for toeplitz3d the taus in ``(r, s, j)`` order, otherwise the
    block entries in ``(r, s, row, col)`` order, every complex number as a
    real draw followed by an imaginary draw, both uniform on [-1, 1).  The
    class projection is applied next, then ``shift * I`` is added to
    ``t_0^(0)`` (``shift=None`` selects :func:`default_shift`).
    """
    if class_tag not in CLASSES:
        raise ValueError(f"unknown structure class {class_tag!r}")
    if not isinstance(dims, DimTriple):
        dims = DimTriple(*dims)
    rng = XorShift64Star(seed)
    m1, m2, m3 = dims
    if class_tag == TOEPLITZ3D:
        shape = (2 * m1 - 1, 2 * m2 - 1, 2 * m3 - 1)
        taus = np.array([rng.complex_unit_box() for _ in range(int(np.prod(shape)))])
        coeffs = np.array(lift_3d(Toeplitz3dSpec(dims, taus.reshape(shape))).coeffs)
    else:
        shape = (2 * m1 - 1, 2 * m2 - 1, m3, m3)
        draws = [rng.complex_unit_box() for _ in range(int(np.prod(shape)))]
        coeffs = np.array(draws, dtype=np.complex128).reshape(shape)
        if class_tag == DSTU:
            u3 = exchange(m3)
            coeffs = (coeffs + u3 @ coeffs.transpose(0, 1, 3, 2) @ u3) / 2
        elif class_tag == SELF_ADJOINT:
            coeffs = _hermitian_mirror(coeffs, dims)
    if shift is None:
        shift = default_shift(coeffs, dims)
    if shift < 0:
        raise ValueError("shift must be nonnegative")
    coeffs[m1 - 1, m2 - 1] += shift * np.eye(m3)
    return BlockTbtSpec(dims, coeffs, class_tag)


def _hermitian_mirror(coeffs, dims):
    # keep r > 0 (all s) and r == 0, s >= 0; the rest is t_{-s}^{(-r)} = (t_s^{(r)})^*
    m1, m2, _ = dims
    out = coeffs.copy()
    for r in range(-(m1 - 1), m1):
        for s in range(-(m2 - 1), m2):
            if r < 0 or (r == 0 and s < 0):
                out[r + m1 - 1, s + m2 - 1] = coeffs[-r + m1 - 1, -s + m2 - 1].conj().T
    c0 = out[m1 - 1, m2 - 1]
    out[m1 - 1, m2 - 1] = (c0 + c0.conj().T) / 2
    return out


def structure_residuals(spec):
    """Max deviation from each class condition, relative to ``max|t|``."""
    c = spec.coeffs
    scale = max(float(np.max(np.abs(c))), np.finfo(float).tiny)
    u3 = exchange(spec.dims.m3)
    mirrored = c[::-1, ::-1].conj().transpose(0, 1, 3, 2)
    return {
        SELF_ADJOINT: float(np.max(np.abs(mirrored - c))) / scale,
        DSTU: float(np.max(np.abs(u3 @ c @ u3 - c.transpose(0, 1, 3, 2)))) / scale,
        TOEPLITZ3D: float(np.max(np.abs(c[:, :, 1:, 1:] - c[:, :, :-1, :-1]))) / scale,
    }


def structure_check(spec, tol=STRUCTURE_TOL):
    """The set of special classes whose defining relation holds to ``tol``."""
    return frozenset(k for k, v in structure_residuals(spec).items() if v <= tol)


def class_residual(spec):
    """Residual of the condition named by ``spec.class_tag`` (0 for ``general``).

    A 3-D Toeplitz spec must also pass the dstu condition, which Toeplitz
    blocks satisfy automatically.
    """
    res = structure_residuals(spec)
    if spec.class_tag == GENERAL:
        return 0.0
    if spec.class_tag == TOEPLITZ3D:
        return max(res[TOEPLITZ3D], res[DSTU])
    return res[spec.class_tag]
