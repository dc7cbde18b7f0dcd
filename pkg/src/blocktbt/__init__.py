"""Structured inversion of block Toeplitz-block-Toeplitz and 3-D Toeplitz matrices."""

from .structured import (
    CLASSES,
    DSTU,
    GENERAL,
    SELF_ADJOINT,
    TOEPLITZ3D,
    BlockTbtSpec,
    DimTriple,
    Toeplitz3dSpec,
    assemble,
    exchange_set,
    identity_spec,
    lift_3d,
    random_spec,
    structure_check,
)
from .identities import build_M, CouplingSet

__version__ = "0.1.0"
