from .contact import (boundary_contact, boundary_walk, distance_field,
                      inward_normal, on_boundary, reach_estimate)
from .domains import (Ball, BoundaryContact, CosineBump, Domain,
                      EllipseDomain, GraphDomain, HalfSpace, OddParabola,
                      Paraboloid, Point, Profile, SuperellipseDomain,
                      as_point, make_domain)
from .modulus import (DiniResult, ModulusOfContinuity, capped_linear,
                      dini_integral, log_dini_integral, log_power_modulus,
                      omega_star, power_modulus)

__all__ = [
    "Ball", "BoundaryContact", "CosineBump", "DiniResult", "Domain",
    "EllipseDomain", "GraphDomain", "HalfSpace", "ModulusOfContinuity",
    "OddParabola", "Paraboloid", "Point", "Profile", "SuperellipseDomain",
    "as_point", "boundary_contact", "boundary_walk", "capped_linear",
    "dini_integral", "distance_field", "inward_normal", "log_dini_integral",
    "log_power_modulus", "make_domain", "omega_star", "on_boundary",
    "power_modulus", "reach_estimate",
]
