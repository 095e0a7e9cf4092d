"""Cyclic A-infinity categories, their cyclic (co)homology and the double
Poisson bracket on the dual bar construction, computed exactly over Q."""
from .ainfty import AInftyCategory, check_ainfty, check_assumption, from_frobenius, validate
from .bardual import DoubleFunctional, Functional, convolution, dual_differential
from .cliio import parse_spec, serialize
from .core import BasisMorphism, sgn_pair
from .hochcyc import quillen_check, verify_bicomplex
from .homology import hc_dims, rank_kernel
from .poisson import (
    bracket, double_bracket, jacobi_on_cyclic, lie_bracket_cyclic, verify_double_poisson,
)

__all__ = [
    "AInftyCategory", "BasisMorphism", "DoubleFunctional", "Functional", "bracket",
    "check_ainfty", "check_assumption", "convolution", "double_bracket",
    "dual_differential", "from_frobenius", "hc_dims", "jacobi_on_cyclic",
    "lie_bracket_cyclic", "parse_spec", "quillen_check", "rank_kernel", "serialize",
    "sgn_pair", "validate", "verify_bicomplex", "verify_double_poisson",
]
