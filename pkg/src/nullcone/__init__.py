"""Numerical laboratory for null rays in matrix symmetric pairs.

The package builds the classical symmetric pairs over the reals, the
complexes and the quaternions in indefinite signature, samples generic
null directions in the tangent summand, canonicalizes their spectra,
computes ray stabilizers, and verifies the geometry of the induced
reductive homogeneous structures (torsion, curvature, Einstein and
Casimir constants) together with two fully worked case studies.
"""

from .linalg import (
    BilinForm,
    DEFAULT_TOL,
    QMat,
    RealSubspace,
    Tolerance,
    algebra_profile,
    bracket,
    gram_matrix,
    gram_signature,
    orth_complement,
    quat_embed,
    quat_mul,
    quat_split,
    signed_gram_schmidt,
    structure_constants,
    sym_signature,
)
from .report import Check, Report, VerificationReport
from .pairs import (
    FIELDS,
    Family,
    SymmetricPair,
    TableRow,
    VARIANTS,
    ambient_dimension,
    build_pair,
    check_symmetric_axioms,
    corrupt_pair,
    default_families,
    dimension_table,
    formula_dims,
    isotropy_matrix,
)
from .orbits import (
    NullVector,
    StabilizerResult,
    canonicalize_symplectic,
    canonicalize_unitary,
    congruence,
    make_null_vector,
    orbit_codimension,
    partner_null,
    sample_null_generic,
    sample_so21_stratum,
    so21_orbit_class,
    split_spectrum,
    stabilizer_of_ray,
    t_form,
)
from .reductive import (
    ReductiveSplit,
    TorsionTensor,
    bianchi_residual,
    canonical_curvature,
    casimir,
    curvature_eval,
    einstein_fit,
    homothety_check,
    metric_gram,
    reductive_split,
    ricci_canonical,
    ricci_levi_civita,
    torsion,
    torsion_derivation_check,
    torsion_eval,
    wang_ziller_check,
)
from .casestudies import (
    SP21Data,
    SU21Data,
    sp21_action_formulas,
    sp21_build,
    sp21_casimir,
    sp21_duality_identity,
    sp21_embedding_check,
    sp21_grading,
    sp21_hatn_isometry,
    sp21_subalgebra_profiles,
    su21_ad_action,
    su21_bracket_table,
    su21_build,
    su21_constant_type,
    su21_einstein,
    su21_invariants,
    su21_nabla_J,
)

__version__ = "0.1.0"
