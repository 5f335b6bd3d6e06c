"""Exact chip-firing on avalanche-finite matrices, Cartan matrices and McKay-Cartan matrices."""

from .intlinalg import AbelianGroupInvariants, IntMatrix, cokernel_invariants, smith_normal_form
from .chipfire import certify, stabilize
from .rootsys import cartan_matrix, root_system
from .chartable import get_table
from .mckay import critical_group as mckay_critical_group, mckay_cartan

__all__ = [
    "AbelianGroupInvariants",
    "IntMatrix",
    "cartan_matrix",
    "certify",
    "cokernel_invariants",
    "get_table",
    "mckay_cartan",
    "mckay_critical_group",
    "root_system",
    "smith_normal_form",
    "stabilize",
]
__version__ = "0.1.0"
