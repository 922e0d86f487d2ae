"""Homothetic covers of convex polytopes in the plane and in space."""
from .compose import (
    BoundReport,
    HullDecomposition,
    compose_cover,
    composed_ratio,
    parallelepiped_check,
    point_cover,
    segment_cover,
    simplex_segment_decomposition,
    simplex_vertex_cover,
    theorem32_bound,
)
from .covering import (
    CoverVerdict,
    HomothetCover,
    VerdictKind,
    gamma_upper,
    inflate,
    min_gamma_for_centers,
    verify_cover,
)
from .errors import (
    AntipodalPairError,
    DegenerateError,
    GeometryError,
    LpStallError,
    NoSubunitCoverError,
    NormalizationError,
    NotOnBoundaryError,
)
from .geometry import ConvexBody, contains, convex_hull, gauge, longest_chord, support
from .illumination import (
    antipodal,
    common_illumination_direction,
    illuminates,
    illumination_number_upper,
    pairwise_antipodal,
)

__version__ = "0.1.0"
