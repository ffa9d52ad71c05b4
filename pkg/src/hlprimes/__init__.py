"""Exact prime counting and Hardy-Littlewood inequality verification."""

from .analytic import (
    EULER_GAMMA,
    DomainError,
    ErrorKind,
    ErrorModel,
    MeanValueBracket,
    error_term,
    li,
    li_k,
    mean_value_bracket,
)
from .engine import (
    AuditRecord,
    CensusReport,
    FamilyKind,
    GridSpec,
    IntervalVerdict,
    MaierRecord,
    MVBoundRecord,
    RangeFamily,
    ScanReport,
    ScanRow,
    Verdict,
    audit_rh,
    audit_unconditional,
    classify,
    evaluate,
    find_first_failure,
    maier_ratio,
    mv_bound_check,
    normalized_psi_deviation,
    oscillation_census,
    range_points,
    scan,
)
from .oracle import pi_oracle, pi_oracle_batch
from .report import (
    Checkpoint,
    checkpoint_load,
    checkpoint_save,
    run_checkpointed_scan,
    write_csv,
    write_jsonl,
    write_plotdata,
)
from .sieve import (
    ChebyshevValues,
    CounterError,
    MemoryBudgetError,
    Method,
    OutOfRangeError,
    PrimeCounter,
    build_counter,
)

__version__ = "0.1.0"
