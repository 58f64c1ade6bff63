"""Exact integer linear algebra and polyhedral geometry."""

from .cones import (Cone, HRep, LatticePolytope, cone_contains, cone_hrep, cone_strictly_convex,
                    convex_hull, extreme_rays)
from .fans import (Fan, chamber_containing, omega_bases, on_wall, refines, restrict_fan,
                   secondary_fan_chambers, spanning_fan, wall_normals)
from .linalg import (Matrix, det, identity, integer_kernel, is_saturated, is_unimodular,
                     matmul, primitive, rank, smith_decompose, smith_diagonal, transpose)

__all__ = [
    "Cone", "Fan", "HRep", "LatticePolytope", "Matrix", "chamber_containing", "cone_contains",
    "cone_hrep", "cone_strictly_convex", "convex_hull", "det", "extreme_rays", "identity",
    "integer_kernel", "is_saturated", "is_unimodular", "matmul", "omega_bases", "on_wall",
    "primitive", "rank", "refines", "restrict_fan", "secondary_fan_chambers", "smith_decompose",
    "smith_diagonal", "spanning_fan", "transpose", "wall_normals",
]
