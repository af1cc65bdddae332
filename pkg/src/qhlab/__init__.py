"""qhlab: a numerical laboratory for the quasi-hyperbolic metric.

The quasi-hyperbolic metric of a domain D weights Euclidean arc length by
the reciprocal boundary distance; geodesic distances h_D(a, b) are found
by shortest paths on distance-weighted grids plus a continuous descent.
The package bundles the domain geometry, closed-form comparison metrics
and bounds, the solver, boundary-flattening maps with certified Jacobian
bounds, and scripted experiments that measure how h_D approaches its
half-space model near the boundary.
"""

__version__ = "0.1.0"

from .errors import QhlabError  # noqa: E402
from .geom.domains import make_domain  # noqa: E402
from .metric import ghm_value, na_value, s_value  # noqa: E402
from .solver.grid import GridSpec, qh_distance  # noqa: E402

__all__ = ["__version__", "GridSpec", "QhlabError", "ghm_value",
           "make_domain", "na_value", "qh_distance", "s_value"]
