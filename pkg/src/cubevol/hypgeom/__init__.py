"""Hyperbolic geometry: models, straight cubes, volumes and sampled identities."""
from .checks import (
    DiameterReport,
    GeodesicTestReport,
    diameter,
    geodesic_test,
    hull_containment,
    parameter_grid,
    points_in_hull,
    vertex_diameter,
)
from .cubes import (
    StraightCube,
    VolumeResult,
    signed_area_quad,
    signed_area_triangle,
    signed_volume,
    straight_cube_eval,
    volume_density,
)
from .ideal import (
    V3_TETRA,
    CoxeterReport,
    clausen,
    coxeter_check,
    ideal_tetra_angles,
    ideal_tetra_volume,
    lobachevsky,
    regular_ideal_cube,
    regular_ideal_cube_directions,
    truncate_ideal_cube,
)
from .models import (
    HPoint,
    distance,
    from_ball,
    from_klein,
    geodesic,
    ideal_from_direction,
    minkowski,
    origin,
    point_at,
    to_ball,
    to_klein,
)
from .straighten import SingularCube, straighten

__all__ = [
    "CoxeterReport",
    "DiameterReport",
    "GeodesicTestReport",
    "HPoint",
    "SingularCube",
    "StraightCube",
    "V3_TETRA",
    "VolumeResult",
    "clausen",
    "coxeter_check",
    "diameter",
    "distance",
    "from_ball",
    "from_klein",
    "geodesic",
    "geodesic_test",
    "hull_containment",
    "ideal_from_direction",
    "ideal_tetra_angles",
    "ideal_tetra_volume",
    "lobachevsky",
    "minkowski",
    "origin",
    "parameter_grid",
    "point_at",
    "points_in_hull",
    "regular_ideal_cube",
    "regular_ideal_cube_directions",
    "signed_area_quad",
    "signed_area_triangle",
    "signed_volume",
    "straight_cube_eval",
    "straighten",
    "to_ball",
    "to_klein",
    "truncate_ideal_cube",
    "vertex_diameter",
    "volume_density",
]
