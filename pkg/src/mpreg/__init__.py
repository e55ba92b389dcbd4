"""Exact sheaf cohomology and splitting checks on products of projective spaces."""

from .bundles import (
    ArityError,
    Bundle,
    BoxSummand,
    Cotangent,
    InvalidAtomError,
    Line,
    ModelError,
    ParseError,
    RestrictionError,
    Space,
    dualize,
    format_bundle,
    format_space,
    format_summand,
    line_bundle,
    line_summand,
    make_bundle,
    make_summand,
    parse_bundle,
    parse_space,
    rank,
    restrict_to_hyperplane,
    twist,
)
from .cohomology import (
    CohomologyTable,
    IntervalSet,
    build_table,
    euler_characteristic,
    h_bott,
    h_box,
    h_bundle,
    h_line,
    h_vector,
    nonvanishing_t_window,
    oracle_euler_sequence,
)
from .harness import (
    ConfigError,
    EnumerationConfig,
    RunReport,
    compare_regularity_definitions,
    enumerate_bundles,
    load_config,
    parse_config_text,
    run_verification,
)
from .regularity import (
    RegularityReport,
    is_hw_regular_at,
    is_regular_at,
    reg,
    regularity_failures,
)
from .splitting import (
    PreconditionError,
    SummandTag,
    TheoremId,
    TheoremVerdict,
    Witness,
    acm_closed_form_line,
    acm_discrepancy,
    acm_printed_variant_line,
    acm_witnesses,
    classify_form,
    condition_for,
    detect_extremal_summand,
    extremal_menu,
    is_acm,
    verify_theorem,
)

__version__ = "0.1.0"

__all__ = [
    "ArityError",
    "Bundle",
    "BoxSummand",
    "CohomologyTable",
    "ConfigError",
    "Cotangent",
    "EnumerationConfig",
    "IntervalSet",
    "InvalidAtomError",
    "Line",
    "ModelError",
    "ParseError",
    "PreconditionError",
    "RegularityReport",
    "RestrictionError",
    "RunReport",
    "Space",
    "SummandTag",
    "TheoremId",
    "TheoremVerdict",
    "Witness",
    "acm_closed_form_line",
    "acm_discrepancy",
    "acm_printed_variant_line",
    "acm_witnesses",
    "build_table",
    "classify_form",
    "compare_regularity_definitions",
    "condition_for",
    "detect_extremal_summand",
    "dualize",
    "enumerate_bundles",
    "euler_characteristic",
    "extremal_menu",
    "format_bundle",
    "format_space",
    "format_summand",
    "h_bott",
    "h_box",
    "h_bundle",
    "h_line",
    "h_vector",
    "is_acm",
    "is_hw_regular_at",
    "is_regular_at",
    "line_bundle",
    "line_summand",
    "load_config",
    "make_bundle",
    "make_summand",
    "nonvanishing_t_window",
    "oracle_euler_sequence",
    "parse_bundle",
    "parse_config_text",
    "parse_space",
    "rank",
    "reg",
    "regularity_failures",
    "restrict_to_hyperplane",
    "run_verification",
    "twist",
    "verify_theorem",
]
