"""Discrete smearing of model quadrilaterals over closed hyperbolic surfaces."""
from .net import GammaNet, build_net, net_checks
from .smearing import (
    BATCHES,
    V2_CUBE,
    ModelQuadrilateral,
    SmearEstimate,
    estimate_smearing,
    sample_isometries,
    smearing_bound,
    stream_seeds,
    upper_bound_from_smearing,
)
from .surface import REFLECTION, SurfaceGroup, boost, build_surface, inverse, rotation

__all__ = [
    "BATCHES",
    "GammaNet",
    "ModelQuadrilateral",
    "REFLECTION",
    "SmearEstimate",
    "SurfaceGroup",
    "V2_CUBE",
    "boost",
    "build_net",
    "build_surface",
    "estimate_smearing",
    "inverse",
    "net_checks",
    "rotation",
    "sample_isometries",
    "smearing_bound",
    "stream_seeds",
    "upper_bound_from_smearing",
]
