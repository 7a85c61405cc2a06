"""Projection constants of finite-dimensional spaces.

Equiangular line systems, the polyhedral norms they induce, minimal
projections in l_inf^N, and the extremal problem whose value is the
maximal projection constant of an n-dimensional space.
"""

from .equiangular import (
    KNOWN_SYSTEMS,
    EquiangularCertificate,
    LineSystem,
    construct_known_system,
    extremal_parameters,
    gerzon_bound,
    orthonormal_system,
    rank_one_independence,
    tight_frame_residual,
    verify_equiangular,
)
from .errors import (
    DimensionError,
    DomainError,
    InvalidWitnessError,
    PreconditionError,
    ProjConstError,
    RankError,
    SchemaError,
    ShapeError,
    SolverError,
    UnsupportedConstructionError,
    UnsupportedMethodError,
)
from .linalg import (
    HermitianEigenResult,
    gram_matrix,
    hermitian_eigendecomposition,
    inf_operator_norm,
)
from .minproj import (
    ProjectionResult,
    SubspaceBasis,
    TraceDualityWitness,
    bounds_summary,
    minimal_projection,
    orthogonal_projection,
    projection_bound,
    random_witness,
    sign_gram_witness,
    trace_duality_lower_bound,
)
from .norms import (
    TABLE_SPACES,
    NormedSpaceSpec,
    norm_from_system,
    table_functionals,
    table_norm,
    table_space,
    unit_ball_vertices,
)
from .phi import (
    PhiProblem,
    PhiState,
    curvature_check,
    gamma_tools,
    kkt_diagnostics,
    maximize_phi,
    phi_objective,
    projected_hessian_check,
    r4_example_scan,
    sphere_moment,
    state_from_system,
)

__version__ = "0.1.0"
