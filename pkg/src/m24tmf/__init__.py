"""Mod-3 cohomology of M24, its 3-nilpotent Steenrod differential, and the
twisted AHSS for tmf at the prime 3."""

from .fieldalg import F3, IntegrityError, PrimeField, rank, kernel, row_reduce, solve
from .m24ring import M24Class, M24Ring, parse_element, steenrod_P, bockstein, verify_relations
from .lcomplex import EllComplex, block_decompose, cohomology, tensor, verlinde_fuse
from .dcomplex import TwistConfig, d_cohomology, epsilon_of, omega_label
from .ahss import e9_classes, group_at, restriction_to_point, fr_subring_exactness
from .d12lattice import TWISTS, coset_norm_vectors, ground_state_count

__version__ = "0.1.0"

__all__ = [
    "F3", "IntegrityError", "PrimeField", "rank", "kernel", "row_reduce", "solve",
    "M24Class", "M24Ring", "parse_element", "steenrod_P", "bockstein", "verify_relations",
    "EllComplex", "block_decompose", "cohomology", "tensor", "verlinde_fuse",
    "TwistConfig", "d_cohomology", "epsilon_of", "omega_label",
    "e9_classes", "group_at", "restriction_to_point", "fr_subring_exactness",
    "TWISTS", "coset_norm_vectors", "ground_state_count",
]
