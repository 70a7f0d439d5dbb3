"""Exact team-orienteering solver for turn-constrained vehicles.

Targets carry scores, each of a small fleet flies one budget-limited route
from a common source to a common destination, and every target may be
collected at a finite set of approach headings; leg costs are shortest
Dubins-path lengths.  The optimum is found by branch-and-price.
"""

from .geometry import Configuration, DubinsPath, sample_path, shortest_dubins
from .instance import (
    DiscretizedGraph,
    Instance,
    InstanceFormatError,
    ReducedGraphView,
    Target,
    build_graph,
    load_instance,
    parse_instance,
    parse_structured_instance,
    uniform_headings,
)
from .master import DualValues, MasterSolution, RestrictedMaster, Route, build_master, reduced_cost
from .oracle import OracleResult, dubins_numeric, enumerate_dtop, enumerate_top_euclidean
from .pricing import PricingResult, price
from .search import (
    IntegralizationError,
    NodeState,
    Solution,
    SolveParams,
    SolveStats,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "Configuration",
    "DiscretizedGraph",
    "DualValues",
    "DubinsPath",
    "Instance",
    "InstanceFormatError",
    "IntegralizationError",
    "MasterSolution",
    "NodeState",
    "OracleResult",
    "PricingResult",
    "ReducedGraphView",
    "RestrictedMaster",
    "Route",
    "Solution",
    "SolveParams",
    "SolveStats",
    "Target",
    "build_graph",
    "build_master",
    "dubins_numeric",
    "enumerate_dtop",
    "enumerate_top_euclidean",
    "load_instance",
    "parse_instance",
    "parse_structured_instance",
    "price",
    "reduced_cost",
    "sample_path",
    "shortest_dubins",
    "solve",
    "uniform_headings",
    "__version__",
]
