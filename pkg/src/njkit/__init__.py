"""Exact computational toolkit for Nijenhuis structures on Lie algebras,
their cohomology, the underlying homotopy-algebra machinery, and the
polynomial differential-geometry counterparts (Froelicher-Nijenhuis calculus
and Lie algebroids).

Everything is computed over the rationals; no floats anywhere.
"""

from .exact import (
    DegreeList,
    Permutation,
    Rational,
    SparseMatrix,
    chi_sign,
    enumerate_local_shuffles,
    enumerate_shuffles,
    format_rational,
    koszul_sign,
    parse_rational,
)
from .lie import (
    Endomorphism,
    LieAlgebra,
    NijenhuisLieAlgebra,
    NijenhuisRepresentation,
    Representation,
    ValidationReport,
    adjoint_nijenhuis,
    deformed_bracket,
    deformed_representation,
    nijenhuis_torsion,
    semidirect_nijenhuis,
    semidirect_product,
    validate_lie,
    validate_nijenhuis,
    validate_nijenhuis_representation,
    validate_representation,
)
from .cohomology import (
    BettiReport,
    Cochain,
    LESReport,
    PairCochain,
    betti,
    delta_lie,
    delta_njl,
    delta_njo,
    les_verify,
    psi,
)
from .braces import (
    CNjLElement,
    GradedSpace,
    LInftyAlgebra,
    MaurerCartanCandidate,
    MCReport,
    NjlLInfty,
    SuspendedHom,
    cochain_to_plain,
    from_suspended,
    graded_lie_on_plain_side,
    linfty_validate,
    mc_candidate,
    mc_residual,
    njl_generalized_jacobi,
    njl_linfty,
    njl_twisted_betti,
    nu_from_algebra,
    plain_to_cochain,
    rn_bracket,
    shuffle_brace,
    tau_from_operator,
    to_suspended,
)
from .forms import (
    Poly,
    ScalarForm,
    VectorValuedForm,
    check_homotopy,
    d_fn,
    de_rham_d,
    diagonal_operator,
    fn_betti,
    fn_bracket,
    fn_bracket_decomposable,
    fn_bracket_on_fields,
    interior_product,
    lie_derivative,
    nijenhuis_torsion_form,
    poincare_h,
    rn_bracket_forms,
)
from .algebroid import (
    AlgebroidForm,
    AlgebroidMCReport,
    ConePair,
    FiberForm,
    GradedField,
    PolyAlgebroid,
    algebroid_fn_bracket,
    algebroid_mc_residual,
    algebroid_over_point,
    algebroid_torsion,
    algebroid_torsion_coefficients,
    anchor_apply,
    b_from_field,
    commutator_from_action,
    delta_njld,
    field_apply,
    fn_bracket_on_sections,
    graded_commutator,
    homological_field_q,
    phi_map,
    phi_on_sections,
    section_bracket,
    trivial_algebroid,
    validate_algebroid,
    validate_phi_chain_map,
)

__all__ = [
    "AlgebroidForm",
    "AlgebroidMCReport",
    "BettiReport",
    "CNjLElement",
    "Cochain",
    "ConePair",
    "DegreeList",
    "Endomorphism",
    "FiberForm",
    "GradedField",
    "GradedSpace",
    "LESReport",
    "LInftyAlgebra",
    "LieAlgebra",
    "MCReport",
    "MaurerCartanCandidate",
    "NijenhuisLieAlgebra",
    "NijenhuisRepresentation",
    "NjlLInfty",
    "PairCochain",
    "Permutation",
    "Poly",
    "PolyAlgebroid",
    "Rational",
    "Representation",
    "ScalarForm",
    "SparseMatrix",
    "SuspendedHom",
    "ValidationReport",
    "VectorValuedForm",
    "adjoint_nijenhuis",
    "algebroid_fn_bracket",
    "algebroid_mc_residual",
    "algebroid_over_point",
    "algebroid_torsion",
    "algebroid_torsion_coefficients",
    "anchor_apply",
    "b_from_field",
    "betti",
    "check_homotopy",
    "chi_sign",
    "cochain_to_plain",
    "commutator_from_action",
    "d_fn",
    "de_rham_d",
    "deformed_bracket",
    "deformed_representation",
    "delta_lie",
    "delta_njl",
    "delta_njld",
    "delta_njo",
    "diagonal_operator",
    "enumerate_local_shuffles",
    "enumerate_shuffles",
    "field_apply",
    "fn_betti",
    "fn_bracket",
    "fn_bracket_decomposable",
    "fn_bracket_on_fields",
    "fn_bracket_on_sections",
    "format_rational",
    "from_suspended",
    "graded_commutator",
    "graded_lie_on_plain_side",
    "homological_field_q",
    "interior_product",
    "koszul_sign",
    "les_verify",
    "lie_derivative",
    "linfty_validate",
    "mc_candidate",
    "mc_residual",
    "nijenhuis_torsion",
    "nijenhuis_torsion_form",
    "njl_generalized_jacobi",
    "njl_linfty",
    "njl_twisted_betti",
    "nu_from_algebra",
    "parse_rational",
    "phi_map",
    "phi_on_sections",
    "plain_to_cochain",
    "poincare_h",
    "psi",
    "rn_bracket",
    "rn_bracket_forms",
    "section_bracket",
    "semidirect_nijenhuis",
    "semidirect_product",
    "shuffle_brace",
    "tau_from_operator",
    "to_suspended",
    "trivial_algebroid",
    "validate_algebroid",
    "validate_lie",
    "validate_nijenhuis",
    "validate_nijenhuis_representation",
    "validate_phi_chain_map",
    "validate_representation",
]
