"""Exact mixing coefficients of finite sequence measures, measures built to
order from prescribed coefficients, mixing-rate processes, and the
concentration bounds the coefficients feed."""

__version__ = "0.1.0"

from .measures import (
    DEFAULT_STATE_CAP,
    FiniteMeasure,
    SeqSpace,
    SignedVector,
    StateCapExceeded,
    ZeroProbabilityPrefix,
    conditional,
    from_weights,
    marginal,
    prefix_prob,
    random_measure,
    tv_distance,
    uniform,
)
from .mixing import (
    ConjectureRow,
    MixingMatrix,
    PhiVector,
    TargetInvalid,
    Violation,
    check_monotonicity,
    check_samson_inequality,
    conjecture_scan,
    eta,
    eta_bar,
    mixing_matrix,
    phi,
    phi_vector,
    validate_target,
)
from .products import (
    FactoredMixing,
    ProductMeasure,
    factored_mixing_matrix,
    materialize,
    parallel_product,
    series_product,
)
from .construction import (
    BracketError,
    ConstructionTrace,
    TraceStep,
    ValidRow,
    check_conditional_preservation,
    construct_from_target,
    pure_row_measure,
    reweight,
    row_objective,
    solve_v,
)
from .process import (
    Checkpoint,
    CheckpointReport,
    HorizonTooSmall,
    RateFunction,
    TruncatedProcess,
    build_process,
    check_checkpoints,
    delta_matrix,
    find_nk,
    rate_R,
    validate_rate,
)
from .concentration import (
    CouplingMatrices,
    bounds_report,
    coupling_matrices,
    kontram_bound,
    op_norm_2,
    op_norm_inf,
    samson_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
