"""kspin: verification tools for spin geometry on Kaehler manifolds.

Exact spinor fiber algebra, Dirac-type operators on flat tori, Kaehlerian
twistor operators and their parallel-transport reformulations, eigenvalue
bound arithmetic, and a numerically cross-validated model of the round
2-sphere.
"""

__version__ = "0.1.0"

from .fiber import (
    FiberContext,
    FiberOperator,
    RicciModel,
    SpinorVector,
    TangentVector,
    build_fiber,
    build_rho_s,
    c_minus,
    c_plus,
    clifford_minus,
    clifford_mul,
    clifford_plus,
    contraction_suite,
    dim_grade,
    form_action,
    iota_minus,
    iota_plus,
    j_map,
    kaehler_form,
    omega_action,
    project_grade,
    twistor_project_fiber,
    volume_form_action,
)
from .bounds import (
    BoundQuery,
    EigendataReport,
    InversionCoefficients,
    classification_report,
    dim_bound,
    friedrich_bound,
    hamiltonian_form_coefficient,
    ke_admissible_r,
    ke_eigenvalue,
    killing_dim,
    kirchberg_bound,
    lemma26_bound,
    middle_eigenvalue,
    newton_recover,
    normalized_ricci_coefficient,
    ricci_eigendata,
    sigma_r_bound,
    special_eigenvalue,
    wbf_coefficient,
    weitzenboeck_inversion,
)
from .scalars import QG
from .torus import (
    BandError,
    FourierSpinorField,
    FourierVectorField,
    TorusContext,
    apply_D,
    apply_Dc,
    apply_Dminus,
    apply_Dplus,
    build_torus,
    clifford_field,
    commutator_suite,
    covariant_derivative,
    dirac_of_vector,
    operator_identity_suite,
    product_context,
    product_field,
    product_operator_suite,
    rough_laplacian,
)
from .sphere import (
    KillingSpace,
    SPHERE_SCAL,
    SphereOperator,
    SphereSpectrum,
    SphereSpinorBasis,
    build_sphere,
    dirac_spectrum,
    eq44_check,
    killing_spinor_space,
)
from .twistor import (
    BlockConnection,
    KernelReport,
    SpinorOneForm,
    TwistorParams,
    build_connection,
    kahlerian_twistor,
    lift_spinor,
    parallel_check,
    parallel_sections,
    prop43_residuals,
    rank_bound,
    riemannian_twistor,
    twistor_identity_suite,
    twistor_kernel,
    twistor_star,
    weitzenboeck_check,
)

__all__ = [
    "BoundQuery",
    "EigendataReport",
    "InversionCoefficients",
    "classification_report",
    "dim_bound",
    "friedrich_bound",
    "hamiltonian_form_coefficient",
    "ke_admissible_r",
    "ke_eigenvalue",
    "killing_dim",
    "kirchberg_bound",
    "lemma26_bound",
    "middle_eigenvalue",
    "newton_recover",
    "normalized_ricci_coefficient",
    "ricci_eigendata",
    "sigma_r_bound",
    "special_eigenvalue",
    "wbf_coefficient",
    "weitzenboeck_inversion",
    "FiberContext",
    "FiberOperator",
    "RicciModel",
    "SpinorVector",
    "TangentVector",
    "QG",
    "build_fiber",
    "build_rho_s",
    "c_minus",
    "c_plus",
    "clifford_minus",
    "clifford_mul",
    "clifford_plus",
    "contraction_suite",
    "dim_grade",
    "form_action",
    "iota_minus",
    "iota_plus",
    "j_map",
    "kaehler_form",
    "omega_action",
    "project_grade",
    "twistor_project_fiber",
    "volume_form_action",
    "BandError",
    "FourierSpinorField",
    "FourierVectorField",
    "TorusContext",
    "apply_D",
    "apply_Dc",
    "apply_Dminus",
    "apply_Dplus",
    "build_torus",
    "clifford_field",
    "commutator_suite",
    "covariant_derivative",
    "dirac_of_vector",
    "operator_identity_suite",
    "product_context",
    "product_field",
    "product_operator_suite",
    "rough_laplacian",
    "KillingSpace",
    "SPHERE_SCAL",
    "SphereOperator",
    "SphereSpectrum",
    "SphereSpinorBasis",
    "build_sphere",
    "dirac_spectrum",
    "eq44_check",
    "killing_spinor_space",
    "BlockConnection",
    "KernelReport",
    "SpinorOneForm",
    "TwistorParams",
    "build_connection",
    "kahlerian_twistor",
    "lift_spinor",
    "parallel_check",
    "parallel_sections",
    "prop43_residuals",
    "rank_bound",
    "riemannian_twistor",
    "twistor_identity_suite",
    "twistor_kernel",
    "twistor_star",
    "weitzenboeck_check",
    "__version__",
]
