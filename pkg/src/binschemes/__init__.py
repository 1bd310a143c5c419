"""Bin-scheme measurement of relative quantities in positive data sets."""

__version__ = "0.1.0"

from .bin_model import (  # noqa: E402
    AboveRange,
    BelowRange,
    BinAssignment,
    BinSchemeSpec,
    BinTally,
    Constant,
    CycleLayout,
    EmptyDataError,
    ProportionVector,
    SchemeError,
    Vector,
    layout,
    validate_scheme,
)
from .engine import assign, per_cycle_proportions, proportions, scale_data, tally  # noqa: E402
from .theory import (  # noqa: E402
    benford,
    benford_second_order,
    convergence_profile,
    general_law,
    general_law_vector,
    kx_segment_proportions,
    once_expanding,
    series_SN,
    twice_expanding,
)
from .conformance import (  # noqa: E402
    build_report,
    classify,
    compare,
    f_avg,
    first_significant_digit,
    second_order_scheme,
    second_significant_digit,
)
