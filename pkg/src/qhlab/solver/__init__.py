from .curve import Curve
from .grid import GridSolver, GridSpec, QhDistanceResult, qh_distance
from .qh import qh_length, segment_weight
from .refine import refine_geodesic

__all__ = [
    "Curve", "GridSolver", "GridSpec", "QhDistanceResult", "qh_distance",
    "qh_length", "refine_geodesic", "segment_weight",
]
