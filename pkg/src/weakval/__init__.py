"""Weak values for finite-dimensional pre- and post-selected systems."""
from .checks import CheckResult, run_checks
from .document import dump_document, load_document, scenario_from_document, scenario_to_document
from .engine import (
    ABLResult,
    ResidualReport,
    WeakValueTable,
    abl_probability,
    born_residual,
    check_consistency_one,
    check_consistency_two,
    distance_via_weak_values,
    joint_probability,
    observable_distance,
    variance,
    variance_via_weak_values,
    weak_equivalence_residual,
    weak_value,
    weak_value_table,
)
from .errors import (
    ComplexGeometry,
    DimensionMismatch,
    InvalidBasis,
    NonFiniteValue,
    NotHermitian,
    NullPostSelection,
    OrthogonalIntermediate,
    ResolutionTooCoarse,
    SchemaError,
    WeakValueError,
    ZeroVector,
)
from .hilbert import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    Observable,
    Spectrum,
    StateVector,
    basis_state,
    identity,
    inner_product,
    is_orthonormal_basis,
    jacobi_eigh,
    make_state,
    projector_onto,
    spectral_decomposition,
    tensor_operator,
    tensor_product,
)
from .optimizer import (
    OptimalPostSelection,
    classify_strangeness,
    grid_oracle_extremal,
    planar_postselection,
    solve_optimal_postselection,
    two_level_weak_value,
)
from .render import render_table
from .scenarios import (
    HardyCoefficients,
    Scenario,
    SpinScenarioParams,
    build_hardy,
    build_spin,
    derive_hardy_prestate,
    hardy_factual_probabilities,
    hardy_table,
    spin_table,
)

__version__ = "0.1.0"
