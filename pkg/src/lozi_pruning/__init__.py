"""Pruning-theoretic symbolic dynamics of the hyperbolic Lozi family."""

from .errors import (
    BudgetExceeded,
    DegenerateBounds,
    EmptyHead,
    Incomparable,
    InsufficientWord,
    LoziError,
    NoFixedPoint,
    NonInvertible,
    NotHyperbolic,
    NotInvariant,
    WrongHead,
    WrongParams,
)
from .derivatives import (
    DerivBounds,
    FdReport,
    MonotoneCone,
    a_derivative_bounds,
    b_derivative_bounds,
    cone_table,
    dp_db_at_b0,
    dq_db_at_b0,
    fd_derivative,
    fd_report,
    monotone_cone,
)
from .geometry import (
    ZERO_ENTROPY_CODES,
    FixedData,
    HomoclinicResult,
    Period4Segment,
    PlanePoint,
    PolygonReport,
    Polyline,
    ZeroEntropyScan,
    ZeroEntropyVerdict,
    classify_zero_entropy,
    fixed_data,
    homoclinic_intersects,
    lozi_apply,
    lozi_apply_inverse,
    lozi_apply_n,
    lyapunov_delta,
    period4_segment,
    polygon_invariance,
    scan_zero_entropy,
    stable_manifold,
    unstable_manifold,
)
from .pruning import (
    PGM_ADMISSIBLE,
    PGM_PRUNED,
    PGM_UNKNOWN,
    BoundedValue,
    Params,
    Raster,
    Verdict,
    admissible_word_count,
    classify_cylinder,
    closed_form_q,
    code_verdict,
    entropy_estimate,
    eval_p,
    eval_pq_cylinder,
    eval_q,
    eval_r,
    eval_s,
    pruned_region_raster,
    special_head,
    verdict_code,
)
from .symbolic import (
    MINUS,
    PLUS,
    Word,
    compare_heads,
    compare_tails,
    enumerate_heads,
    enumerate_tails,
    enumerate_words,
    head_coordinate,
    redot,
    shift,
    tail_coordinate,
)
from .tent import (
    Kneading,
    TentParams,
    check_identity_shifted,
    check_identity_sum,
    identity_tail_bound,
    kneading,
    tent_entropy_lap,
    tent_lap_count,
    tent_orbit,
)
from .cli import RunConfig
from .verify import CheckResult, run_checks

__version__ = "0.1.0"
