"""Executable net calculus: directed sets, nets, limit oracles and the
interchange checks built on top of them."""

from netcalc.directed import (
    DirectedSet,
    FiniteDirectedSet,
    ProductDirectedSet,
    TruncatedNaturals,
    product,
    upper_bound,
    validate_directed,
)
from netcalc.net import Net, NetMatrix, lift_net_of_nets, map_net, transpose
from netcalc.space import (
    FiniteTopology,
    LimitOutcome,
    MetricSpace,
    is_hausdorff,
    limit,
    metric_space,
    neighborhood_base,
)

__version__ = "0.1.0"

__all__ = [
    "DirectedSet",
    "FiniteDirectedSet",
    "ProductDirectedSet",
    "TruncatedNaturals",
    "product",
    "upper_bound",
    "validate_directed",
    "Net",
    "NetMatrix",
    "lift_net_of_nets",
    "map_net",
    "transpose",
    "FiniteTopology",
    "LimitOutcome",
    "MetricSpace",
    "is_hausdorff",
    "limit",
    "metric_space",
    "neighborhood_base",
]
