"""Exact-arithmetic certification that the orthogonal modular variety of an
even lattice L = 2U + M of signature (2, n) is of general type.

The pipeline combines a cusp-form existence check for the Weil
representation of the discriminant form, an upper bound for the reflective
obstruction sum via Hirzebruch-Mumford volumes, and an exact bigness
inequality.  All arithmetic is exact (integers, fractions, directed
rational intervals for irrational constants); a "GeneralType" verdict is
rigorous, and "Inconclusive" never claims the opposite.
"""

from .errors import (CapExceeded, GentypeError, InputInvalid,
                     NonIntegralDimension, NonRationalVolume, NormClassMismatch,
                     NotIsotropic, NotQuasiCyclicWhenRequired, ParityViolation,
                     PreconditionUnverified, SignatureMismatch)
from .exactnum import PI, RationalInterval, SymbolicReal
from .fqf import (DEFAULT_CAP, FiniteQuadraticForm, Subgroup,
                  classify_quasi_cyclic, is_isometric, is_quasi_cyclic,
                  orbits, orthogonal_group, quasi_cyclic_reduction,
                  quotient_form, signature_mod_8, subgroup_form)
from .hmvol import vol_hm, volume_terms, zeta_interval
from .lattice import (EvenLattice, discriminant_form, e8, eichler_vector,
                      hyperbolic_plane, lattice_from_json, lattice_to_json,
                      orthogonal_complement, overlattice, rank1)
from .pipeline import (Certificate, ScanResult, ScanRow, ambient_lattice,
                       bigness_inequality, bigness_rhs, certify,
                       final_estimate, range_scan)
from .reflect import (ObstructionResult, ReflectiveClass, bound_e, bound_f,
                      bound_g, enumerate_classes, obstruction_sum,
                      orbit_reduce, universal_bound_sum)
from .weil import (WeilRep, alpha_minus_closed, alpha_terms, bruinier_bounds,
                   build_weil, dim_cusp, min_cusp_weight, verify_relations)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "Certificate", "DEFAULT_CAP", "EvenLattice",
    "FiniteQuadraticForm", "GentypeError", "InputInvalid",
    "NonIntegralDimension", "NonRationalVolume", "NormClassMismatch",
    "NotIsotropic", "NotQuasiCyclicWhenRequired", "ObstructionResult",
    "ParityViolation", "PI", "PreconditionUnverified", "RationalInterval",
    "ReflectiveClass", "ScanResult", "ScanRow", "SignatureMismatch",
    "Subgroup", "SymbolicReal", "WeilRep", "alpha_minus_closed",
    "alpha_terms", "ambient_lattice", "bigness_inequality", "bigness_rhs",
    "bound_e", "bound_f", "bound_g", "bruinier_bounds", "build_weil",
    "certify", "classify_quasi_cyclic", "dim_cusp", "discriminant_form",
    "e8", "eichler_vector", "enumerate_classes", "final_estimate",
    "hyperbolic_plane", "is_isometric", "is_quasi_cyclic",
    "lattice_from_json", "lattice_to_json", "min_cusp_weight",
    "obstruction_sum", "orbit_reduce", "orbits", "orthogonal_complement",
    "orthogonal_group", "overlattice", "quasi_cyclic_reduction",
    "quotient_form", "range_scan", "rank1", "signature_mod_8",
    "subgroup_form", "universal_bound_sum", "verify_relations", "vol_hm",
    "volume_terms", "zeta_interval", "__version__",
]
