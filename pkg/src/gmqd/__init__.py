"""Geometric quantum discord of two-qubit X states under local dephasing.

Public surface: state representations and conversions (``qstate``),
discord evaluators (``measures``), dephasing channels and trajectories
(``channels``), freezing analysis (``freezing``), small linear-algebra
kernels (``numerics``), and the command line (``cli``).
"""

from .channels import (
    ColoredNoiseParams,
    DephasingParams,
    KrausSet,
    Trajectory,
    TrajectoryRecord,
    apply_kraus,
    colored_noise_kraus,
    colored_step,
    colored_trajectory,
    dephase_markov,
    lambda_colored,
    markov_trajectory,
    phase_damping_kraus,
)
from .errors import (
    GmqdError,
    InputFormatError,
    KrausCompletenessError,
    NormalizationError,
    PreconditionError,
    StateValidationError,
    StructureError,
    UnphysicalBlochError,
    UnphysicalStateError,
    UnsupportedSubclassError,
)
from .freezing import (
    FreezingVerdict,
    FrozenInterval,
    RegionMembership,
    check_freezing_bell,
    check_freezing_x,
    detect_frozen_intervals,
    freeze_endpoint_markov,
    region_membership,
)
from .measures import (
    GmqdBreakdown,
    MeasurementDirection,
    gmqd_k,
    gmqd_oracle,
    gmqd_svd,
    measurement_residual,
    x_lambdas,
)
from .numerics import herm_eigenvalues, singular_values, symmetric_eigenvalues
from .qstate import (
    BellDiagonalParams,
    BlochForm,
    DensityMatrix,
    ValidationReport,
    XState,
    bell_diagonal_dense,
    bell_diagonal_state,
    bloch_compose,
    bloch_decompose,
    build_r_prime,
    density_from_matrix,
    density_to_x,
    make_x_state,
    parse_state_json,
    random_bell_diagonal,
    random_density_matrix,
    random_x_state,
    validate_density,
    x_state_bloch,
    x_state_to_json,
    x_to_density,
)

__version__ = "0.1.0"
