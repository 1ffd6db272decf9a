"""Support-function convex geometry: width, k-brightness, curvature and constant-width experiments."""
__version__ = "0.1.0"

from .bodies import (
    Ball,
    Ellipsoid,
    MinkowskiSum,
    OddPerturbedBall,
    Polytope,
    Reflection,
    ReuleauxRevolution,
    SupportBody,
    Translated,
    make_constant_width,
    minkowski_sum,
    reflect,
    reverse_gauss,
    scale,
    support,
    support_hessian,
    translate,
    width,
)
from .curvature import radii_of_curvature, relative_curvature_eigs, rnd_ratio, surface_density
from .grassmann import Subspace, haar_subspace, project_body
from .projvol import brightness_stats, hull_volume, minkowski_projection_gap, projection_volume

__all__ = [
    "Ball", "Ellipsoid", "MinkowskiSum", "OddPerturbedBall", "Polytope", "Reflection",
    "ReuleauxRevolution", "SupportBody", "Translated", "Subspace",
    "brightness_stats", "haar_subspace", "hull_volume", "make_constant_width",
    "minkowski_projection_gap", "minkowski_sum", "project_body", "projection_volume",
    "radii_of_curvature", "reflect", "relative_curvature_eigs", "reverse_gauss", "rnd_ratio",
    "scale", "support", "support_hessian", "surface_density", "translate", "width",
]
