"""LP-rounding solvers for capacitated knapsack median and facility location."""

from ._core import (
    BoundViolation,
    CaproundError,
    InfeasibleError,
    Instance,
    MetricError,
    ParseError,
    Solution,
    UsageError,
    csv_header,
    exact,
    from_coordinates,
    generate,
    load,
    lp_value,
    parse,
    solve,
)

__all__ = [
    "BoundViolation",
    "CaproundError",
    "InfeasibleError",
    "Instance",
    "MetricError",
    "ParseError",
    "Solution",
    "UsageError",
    "csv_header",
    "exact",
    "from_coordinates",
    "generate",
    "load",
    "lp_value",
    "parse",
    "solve",
]
