"""Two-locus gamete-frequency dynamics on the 3-simplex.

Quick use::

    >>> from twolocus import validate, RecombinationParams, step_additive, predicted_limit
    >>> s = validate(0.4, 0.2, 0.1, 0.3)
    >>> p = RecombinationParams(0.5, 0.5)
    >>> predicted_limit(s, p)
    GameteState(x=0.30000000000000004, y=0.30000000000000004, u=0.2, v=0.2)

Pass ``fractions.Fraction`` coordinates and parameters to get exact
arithmetic throughout.
"""

from .errors import (
    DegenerateLimit,
    InvalidParameters,
    IoError,
    MaxStepsExceeded,
    NegativeCoordinate,
    NotAFixedPoint,
    NotOnSimplex,
    OutOfSlice,
    RateUndefined,
    SpectrumMismatch,
    TwoLocusError,
    UsageError,
)
from .operator import (
    apply_qso_tensor,
    fixed_point_spectrum,
    jacobian,
    numeric_eigenvalues,
    qso_tensor,
    step_additive,
    step_qso,
)
from .scalars import Tolerance, approx_eq, format_scalar, parse_scalar
from .slices import (
    EigenPair,
    SliceCoords,
    TransferMatrix,
    eigenvalues,
    lift,
    limit_matrix,
    matrix_power,
    predicted_limit,
    project,
    reduced_step,
    repeated_power,
    transfer_matrix,
)
from .state import (
    GameteState,
    RecombinationParams,
    alpha_of,
    is_fixed_point,
    linkage_disequilibrium,
    parse_state,
    validate,
)
from .trajectory import (
    ConvergenceReport,
    StopCriterion,
    Trajectory,
    VerificationReport,
    estimate_rate,
    iterate,
    run_to_convergence,
    verify_against_oracle,
)

__version__ = "0.1.0"
