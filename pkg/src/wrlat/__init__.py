"""Well-rounded sublattices of planar arithmetic lattices, in exact integer arithmetic."""

from .classes import ConicPoint, conic_points, enumerate_classes, height_zeta_partial, mn_to_class, phi_bound_check, zeta_class_partial
from .lattice import (
    ClassTuple,
    GramMatrix,
    InvariantViolation,
    MNParam,
    SublatticeHandle,
    ValidationError,
    gram_of,
    hnf_canonicalize,
    parse_class,
    sublattice_gram,
)
from .oracle import CeilingReached, brute_wr_census, find_wr_sublattice, hnf_sublattices, rescale_to_integral
from .reduction import NotWellRounded, gauss_reduce, is_similar, is_wr, minimal_pairs, minimum, reduced, similarity_class_of
from .sublattices import (
    QFormData,
    RotationSpec,
    TypeMismatch,
    build_q_form,
    coeff_matrix,
    enumerate_all_wr,
    enumerate_similar,
    rotation_specs,
)
from .zeta import (
    CoeffSeries,
    epstein_partial,
    growth_report,
    reference_phi_partial,
    sandwich_check,
    sigma_series,
    wr_zeta_coeffs,
    z_class_partial,
    z_total_partial,
)

__version__ = "0.1.0"
